#include "bmhd/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bmhd/spectral_ops.hpp"

namespace bmhd {

namespace {

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

void check_index(const BesovIndex& idx) {
    const bool p_ok = idx.p == 1.0 || idx.p == 2.0 || idx.p == 3.0 || idx.p == 6.0 || std::isinf(idx.p);
    const bool r_ok = idx.r == 1.0 || idx.r == 2.0 || std::isinf(idx.r);
    if (!p_ok || !r_ok) throw std::domain_error("besov_norm: unsupported (p, r)");
}

}  // namespace

double DyadicPartition::chi_profile(double rho) {
    if (rho <= 0.75) return 1.0;
    if (rho >= 4.0 / 3.0) return 0.0;
    const double t = (rho - 0.75) / (4.0 / 3.0 - 0.75);
    return std::clamp(1.0 - smooth_step(t), 0.0, 1.0);
}

double DyadicPartition::phi_profile(double rho) {
    return chi_profile(0.5 * rho) - chi_profile(rho);
}

DyadicPartition DyadicPartition::build(GridPtr grid) {
    DyadicPartition part(std::move(grid));
    const auto& g = *part.grid_;

    // candidate block range from the lattice frequency extremes
    const int j_lo = static_cast<int>(std::floor(std::log2(g.xi_min() * 3.0 / 8.0))) - 1;
    const int j_hi = static_cast<int>(std::ceil(std::log2(g.xi_max() * 4.0 / 3.0))) + 1;

    std::vector<std::vector<double>> samples;
    std::vector<int> live;
    for (int j = j_lo; j <= j_hi; ++j) {
        std::vector<double> vals(g.size(), 0.0);
        bool any = false;
        const double scale = std::ldexp(1.0, -j);  // 2^{-j}
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.on_nyquist(i)) continue;
            const double v = phi_profile(scale * std::sqrt(g.xi_sq(i)));
            vals[i] = v;
            any = any || v != 0.0;
        }
        if (any) {
            if (live.empty()) part.jmin_ = j;
            live.push_back(j);
            samples.push_back(std::move(vals));
        }
    }
    if (live.empty()) throw std::runtime_error("dyadic partition: no active blocks");
    part.jmax_ = live.back();
    if (part.jmax_ - part.jmin_ + 1 != static_cast<int>(live.size()))
        throw std::runtime_error("dyadic partition: non-contiguous block range");
    part.phi_ = std::move(samples);

    part.cum_.resize(part.phi_.size());
    std::vector<double> running(g.size(), 0.0);
    for (std::size_t jj = 0; jj < part.phi_.size(); ++jj) {
        for (std::size_t i = 0; i < g.size(); ++i) running[i] += part.phi_[jj][i];
        part.cum_[jj] = running;
    }

    part.chi_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        part.chi_[i] = g.on_nyquist(i) ? 0.0 : chi_profile(std::sqrt(g.xi_sq(i)));
    return part;
}

std::span<const double> DyadicPartition::phi_values(int j) const {
    if (j < jmin_ || j > jmax_) return {};
    return phi_[static_cast<std::size_t>(j - jmin_)];
}

namespace {

ScalarField apply_real_multiplier(const ScalarField& f, std::span<const double> mult) {
    ScalarField out(f.grid_ptr());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = mult[i] * f[i];
    return out;
}

}  // namespace

ScalarField DyadicPartition::hom_block(const ScalarField& f, int j) const {
    if (j < jmin_ || j > jmax_) return ScalarField(f.grid_ptr());
    return apply_real_multiplier(f, phi_[static_cast<std::size_t>(j - jmin_)]);
}

VectorField DyadicPartition::hom_block(const VectorField& v, int j) const {
    VectorField out(v.grid_ptr());
    for (int d = 0; d < v.dim(); ++d) out.comp(d) = hom_block(v.comp(d), j);
    return out;
}

ScalarField DyadicPartition::hom_cutoff(const ScalarField& f, int j) const {
    ScalarField out(f.grid_ptr());
    if (j - 1 >= jmin_) {
        const int top = std::min(j - 1, jmax_);
        out = apply_real_multiplier(f, cum_[static_cast<std::size_t>(top - jmin_)]);
    }
    out[0] = f[0];  // the mean rides along as the constant part
    return out;
}

VectorField DyadicPartition::hom_cutoff(const VectorField& v, int j) const {
    VectorField out(v.grid_ptr());
    for (int d = 0; d < v.dim(); ++d) out.comp(d) = hom_cutoff(v.comp(d), j);
    return out;
}

ScalarField DyadicPartition::inhom_block(const ScalarField& f, int j) const {
    if (j <= -2) return ScalarField(f.grid_ptr());
    if (j == -1) {
        ScalarField out = apply_real_multiplier(f, chi_);
        out[0] = f[0];  // chi(0) = 1
        return out;
    }
    return hom_block(f, j);
}

double DyadicPartition::block_lp_norm(const ScalarField& f, int j, double p) const {
    const ScalarField* fp = &f;
    return block_lp_norm(std::span<const ScalarField>(fp, 1), j, p);
}

double DyadicPartition::block_lp_norm(std::span<const ScalarField> fs, int j, double p) const {
    if (j < jmin_ || j > jmax_) return 0.0;
    const auto& mult = phi_[static_cast<std::size_t>(j - jmin_)];
    if (p == 2.0) {
        double acc = 0.0;
        for (const auto& f : fs)
            for (std::size_t i = 0; i < f.size(); ++i) acc += mult[i] * mult[i] * std::norm(f[i]);
        return std::sqrt(acc / grid_->volume());
    }
    std::vector<ScalarField> blocks;
    blocks.reserve(fs.size());
    for (const auto& f : fs) blocks.push_back(apply_real_multiplier(f, mult));
    if (blocks.size() == 1) return lp_norm(blocks[0], p);
    // aggregate components through the pointwise magnitude
    std::vector<std::vector<double>> phys(blocks.size());
    for (std::size_t c = 0; c < blocks.size(); ++c) phys[c] = transform_inverse(blocks[c]);
    const std::size_t npts = phys[0].size();
    const double w = grid_->cell_volume();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < npts; ++i) {
            double mag = 0.0;
            for (const auto& ph : phys) mag += ph[i] * ph[i];
            m = std::max(m, mag);
        }
        return std::sqrt(m);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        double mag = 0.0;
        for (const auto& ph : phys) mag += ph[i] * ph[i];
        acc += std::pow(std::sqrt(mag), p);
    }
    return std::pow(acc * w, 1.0 / p);
}

double DyadicPartition::inhom_block_lp_norm(std::span<const ScalarField> fs, int j, double p) const {
    if (j <= -2) return 0.0;
    if (j >= 0) return block_lp_norm(fs, j, p);
    std::vector<ScalarField> blocks;
    blocks.reserve(fs.size());
    for (const auto& f : fs) blocks.push_back(inhom_block(f, -1));
    if (p == 2.0) return l2_norm(std::span<const ScalarField>(blocks.data(), blocks.size()));
    if (blocks.size() == 1) return lp_norm(blocks[0], p);
    std::vector<std::vector<double>> phys(blocks.size());
    for (std::size_t c = 0; c < blocks.size(); ++c) phys[c] = transform_inverse(blocks[c]);
    const std::size_t npts = phys[0].size();
    double acc = 0.0, m = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
        double mag = 0.0;
        for (const auto& ph : phys) mag += ph[i] * ph[i];
        if (std::isinf(p)) m = std::max(m, mag);
        else acc += std::pow(std::sqrt(mag), p);
    }
    if (std::isinf(p)) return std::sqrt(m);
    return std::pow(acc * grid_->cell_volume(), 1.0 / p);
}

double DyadicPartition::besov_norm(std::span<const ScalarField> fs, const BesovIndex& idx) const {
    check_index(idx);
    const int j_first = idx.homogeneous ? jmin_ : -1;
    double acc = 0.0;
    for (int j = j_first; j <= jmax_; ++j) {
        const double bn = idx.homogeneous ? block_lp_norm(fs, j, idx.p) : inhom_block_lp_norm(fs, j, idx.p);
        const double term = std::exp2(idx.s * j) * bn;
        if (std::isinf(idx.r)) acc = std::max(acc, term);
        else if (idx.r == 1.0) acc += term;
        else acc += term * term;
    }
    if (std::isinf(idx.r) || idx.r == 1.0) return acc;
    return std::sqrt(acc);
}

double DyadicPartition::besov_norm(const ScalarField& f, const BesovIndex& idx) const {
    const ScalarField* fp = &f;
    return besov_norm(std::span<const ScalarField>(fp, 1), idx);
}

double DyadicPartition::besov_norm(const VectorField& v, const BesovIndex& idx) const {
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(v.dim()));
    for (int d = 0; d < v.dim(); ++d) comps.push_back(v.comp(d));
    return besov_norm(std::span<const ScalarField>(comps.data(), comps.size()), idx);
}

namespace {

template <typename FieldT>
double embedding_ratio_impl(const FieldT& f, const DyadicPartition& part, EmbeddingTarget target) {
    const double n_half = 0.5 * part.grid().dim();
    const double source = part.besov_norm(f, BesovIndex{n_half, 2.0, 1.0, true});
    double tgt = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    switch (target) {
        case EmbeddingTarget::lebesgue_inf: {
            // L^inf of the zero-mean part (the source norm ignores the mean)
            FieldT zm = f;
            if constexpr (std::is_same_v<FieldT, ScalarField>) zm.set_mean(0.0);
            else
                for (int d = 0; d < zm.dim(); ++d) zm.comp(d).set_mean(0.0);
            tgt = lp_norm(zm, inf);
            break;
        }
        case EmbeddingTarget::besov_0_inf_inf:
            tgt = part.besov_norm(f, BesovIndex{0.0, inf, inf, true});
            break;
        case EmbeddingTarget::besov_n2_2_inf:
            tgt = part.besov_norm(f, BesovIndex{n_half, 2.0, inf, true});
            break;
    }
    if (source == 0.0) {
        if (tgt == 0.0) return 0.0;
        throw std::domain_error("embedding_ratio: zero source norm with nonzero target");
    }
    return tgt / source;
}

}  // namespace

double embedding_ratio(const ScalarField& f, const DyadicPartition& part, EmbeddingTarget target) {
    return embedding_ratio_impl(f, part, target);
}

double embedding_ratio(const VectorField& f, const DyadicPartition& part, EmbeddingTarget target) {
    return embedding_ratio_impl(f, part, target);
}

}  // namespace bmhd
