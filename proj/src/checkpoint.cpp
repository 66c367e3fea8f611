#include "bmhd/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "bmhd/io_util.hpp"

namespace bmhd {

static_assert(std::endian::native == std::endian::little, "checkpoint format assumes little endian");

namespace {

constexpr char kMagic[4] = {'B', 'M', 'H', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    out.append(p, sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated checkpoint");
    return v;
}

void put_field(std::string& out, const VectorField& v) {
    for (int d = 0; d < v.dim(); ++d) {
        for (const auto& c : v.comp(d).coeffs()) {
            put(out, c.real());
            put(out, c.imag());
        }
    }
}

void take_field(std::ifstream& in, VectorField& v) {
    for (int d = 0; d < v.dim(); ++d) {
        for (auto& c : v.comp(d).coeffs()) {
            const double re = take<double>(in);
            const double im = take<double>(in);
            c = Complex{re, im};
        }
    }
}

}  // namespace

void write_checkpoint(const std::string& path, const MHDState& state, double nu) {
    const auto& g = state.u.grid();
    std::string out;
    out.reserve(64 + 2 * sizeof(double) * g.size() * static_cast<std::size_t>(2 * g.dim()));
    out.append(kMagic, 4);
    put(out, kVersion);
    put(out, static_cast<std::uint8_t>(g.dim()));
    put(out, static_cast<std::uint32_t>(g.n()));
    put(out, g.length());
    put(out, state.t);
    put(out, nu);
    put_field(out, state.u);
    put_field(out, state.B);
    atomic_write_bytes(path, out);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("bad checkpoint magic");
    const auto version = take<std::uint32_t>(in);
    if (version != kVersion) throw std::runtime_error("unsupported checkpoint version");
    const int dim = take<std::uint8_t>(in);
    const int n = static_cast<int>(take<std::uint32_t>(in));
    const double length = take<double>(in);
    const double t = take<double>(in);
    const double nu = take<double>(in);

    auto grid = make_grid(dim, n, length);
    Checkpoint cp{MHDState(VectorField(grid), VectorField(grid)), nu};
    cp.state.t = t;
    take_field(in, cp.state.u);
    take_field(in, cp.state.B);
    return cp;
}

}  // namespace bmhd
