#include "bmhd/constants_table.hpp"

#include <fstream>
#include <stdexcept>

#include "bmhd/io_util.hpp"
#include "json.hpp"

namespace bmhd {

namespace {

using nlohmann::json;

json to_json(const DimConstants& c) {
    return json{{"c1", c.c1},
                {"c2", c.c2},
                {"c3", c.c3},
                {"c4", c.c4},
                {"algebra", c.algebra},
                {"embedding_linf", c.embedding_linf},
                {"embedding_b0", c.embedding_b0},
                {"para_t", c.para_t},
                {"para_r", c.para_r},
                {"commutator", c.commutator},
                {"chemin", c.chemin},
                {"adv_pairing", c.adv_pairing},
                {"gronwall", c.gronwall},
                {"deriv_bound", c.deriv_bound}};
}

DimConstants dim_from_json(const json& j) {
    DimConstants c;
    c.c1 = j.at("c1");
    c.c2 = j.at("c2");
    c.c3 = j.at("c3");
    c.c4 = j.at("c4");
    c.algebra = j.at("algebra");
    c.embedding_linf = j.at("embedding_linf");
    c.embedding_b0 = j.at("embedding_b0");
    c.para_t = j.at("para_t");
    c.para_r = j.at("para_r");
    c.commutator = j.at("commutator");
    c.chemin = j.at("chemin");
    c.adv_pairing = j.at("adv_pairing");
    c.gronwall = j.at("gronwall");
    c.deriv_bound = j.at("deriv_bound");
    return c;
}

}  // namespace

const DimConstants& ConstantsTable::for_dim(int dim) const {
    if (dim == 2) return dim2;
    if (dim == 3) return dim3;
    throw std::invalid_argument("constants table: dim must be 2 or 3");
}

ConstantsTable ConstantsTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open constants table: " + path);
    json j = json::parse(in);
    ConstantsTable t;
    t.margin = j.at("margin");
    const auto& c = j.at("corpus");
    t.corpus.n2d = c.at("n2d");
    t.corpus.n3d = c.at("n3d");
    t.corpus.box_length = c.at("box_length");
    t.corpus.fields = c.at("fields");
    t.corpus.snapshots = c.at("snapshots");
    t.corpus.alpha_lo = c.at("alpha_lo");
    t.corpus.alpha_hi = c.at("alpha_hi");
    t.corpus.seed = c.at("seed");
    t.dim2 = dim_from_json(j.at("dim2"));
    t.dim3 = dim_from_json(j.at("dim3"));
    t.raw2 = dim_from_json(j.at("raw2"));
    t.raw3 = dim_from_json(j.at("raw3"));
    return t;
}

void ConstantsTable::save(const std::string& path) const {
    json j;
    j["margin"] = margin;
    j["corpus"] = json{{"n2d", corpus.n2d},         {"n3d", corpus.n3d},
                       {"box_length", corpus.box_length}, {"fields", corpus.fields},
                       {"snapshots", corpus.snapshots},   {"alpha_lo", corpus.alpha_lo},
                       {"alpha_hi", corpus.alpha_hi},     {"seed", corpus.seed}};
    j["dim2"] = to_json(dim2);
    j["dim3"] = to_json(dim3);
    j["raw2"] = to_json(raw2);
    j["raw3"] = to_json(raw3);
    atomic_write_text(path, j.dump(2) + "\n");
}

}  // namespace bmhd
