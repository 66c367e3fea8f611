#include "bmhd/paraproduct.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bmhd/spectral_ops.hpp"

namespace bmhd {

namespace {

void require_div_free(const VectorField& vel) {
    if (vel.divergence_error() > 1e-10)
        throw std::domain_error("paraproduct: transport field must be divergence-free");
}

}  // namespace

ScalarField para_t(const DyadicPartition& part, const ScalarField& u, const ScalarField& v) {
    if (!u.grid().same_as(v.grid())) throw std::invalid_argument("para_t: grid mismatch");
    ScalarField acc(u.grid_ptr());
    for (int j = part.jmin(); j <= part.jmax(); ++j) {
        acc += multiply(part.hom_cutoff(u, j - 1), part.hom_block(v, j));
    }
    return acc;
}

ScalarField remainder_r(const DyadicPartition& part, const ScalarField& u, const ScalarField& v) {
    if (!u.grid().same_as(v.grid())) throw std::invalid_argument("remainder_r: grid mismatch");
    ScalarField acc(u.grid_ptr());
    for (int j = part.jmin(); j <= part.jmax(); ++j) {
        const ScalarField vj = part.hom_block(v, j);
        for (int k = j - 1; k <= j + 1; ++k) {
            if (k < part.jmin() || k > part.jmax()) continue;
            acc += multiply(part.hom_block(u, k), vj);
        }
    }
    return acc;
}

BonyTriple bony_decompose(const DyadicPartition& part, const ScalarField& u, const ScalarField& v) {
    return BonyTriple{para_t(part, u, v), para_t(part, v, u), remainder_r(part, u, v)};
}

double bony_reconstruction_error(const DyadicPartition& part, const ScalarField& u, const ScalarField& v) {
    auto triple = bony_decompose(part, u, v);
    ScalarField product = multiply(u, v);
    const double ref = l2_norm(product);
    product[0] -= Complex{u.mean() * v.mean() * u.grid().volume(), 0.0};
    ScalarField diff = triple.t_uv + triple.t_vu + triple.r_uv - product;
    return ref > 0.0 ? l2_norm(diff) / ref : l2_norm(diff);
}

ScalarField commutator_qj(const DyadicPartition& part, const VectorField& vel, const ScalarField& f, int j) {
    if (!vel.grid().same_as(f.grid())) throw std::invalid_argument("commutator_qj: grid mismatch");
    require_div_free(vel);
    return advect_scalar(vel, part.hom_block(f, j)) - part.hom_block(advect_scalar(vel, f), j);
}

ScalarField advection_t_part_block(const DyadicPartition& part, const VectorField& u,
                                   const ScalarField& b_comp, int j) {
    ScalarField acc(u.grid_ptr());
    for (int jp = part.jmin(); jp <= part.jmax(); ++jp) {
        acc += part.hom_block(advect_scalar(part.hom_cutoff(u, jp - 1), part.hom_block(b_comp, jp)), j);
    }
    return acc;
}

AdvectionBlockSplit advection_block_decomposition(const DyadicPartition& part, const VectorField& u,
                                                  const ScalarField& b_comp, int j) {
    if (!u.grid().same_as(b_comp.grid())) throw std::invalid_argument("grid mismatch");
    require_div_free(u);

    AdvectionBlockSplit out{ScalarField(u.grid_ptr()), ScalarField(u.grid_ptr()), ScalarField(u.grid_ptr())};
    out.transport = advect_scalar(part.hom_cutoff(u, j - 1), part.hom_block(b_comp, j));

    // P_j: the two surviving neighbour terms (S_{j'-1} - S_{j-1}) u . grad of
    // the block overlaps; the j' = j term cancels identically.
    for (int jp : {j - 1, j + 1}) {
        const VectorField du = part.hom_cutoff(u, jp - 1) - part.hom_cutoff(u, j - 1);
        const ScalarField bb = part.hom_block(part.hom_block(b_comp, jp), j);
        out.p_j += advect_scalar(du, bb);
    }

    // Q_j: commutators of the block with the frequency-localized transports
    for (int jp = part.jmin(); jp <= part.jmax(); ++jp) {
        const VectorField uc = part.hom_cutoff(u, jp - 1);
        const ScalarField bj = part.hom_block(b_comp, jp);
        out.q_j += part.hom_block(advect_scalar(uc, bj), j) - advect_scalar(uc, part.hom_block(bj, j));
    }
    return out;
}

ProductEstimateRatios product_estimate_ratios(const DyadicPartition& part, const ScalarField& u,
                                              const ScalarField& v) {
    const double inf = std::numeric_limits<double>::infinity();
    const double n_half = 0.5 * part.grid().dim();

    const double u_low = part.besov_norm(u, {-1.0, inf, inf, true});
    const double v_high = part.besov_norm(v, {n_half + 1.0, 2.0, 1.0, true});
    const double u_mid = part.besov_norm(u, {n_half, 2.0, 1.0, true});
    const double v_mid = part.besov_norm(v, {n_half, 2.0, 1.0, true});

    ProductEstimateRatios out{0.0, 0.0, 0.0};
    const BesovIndex target{n_half, 2.0, 1.0, true};

    const double t_num = part.besov_norm(para_t(part, u, v), target);
    if (t_num > 0.0) {
        if (u_low * v_high == 0.0) throw std::domain_error("product_estimate_ratios: degenerate T denominator");
        out.t_ratio = t_num / (u_low * v_high);
    }
    const double r_num = part.besov_norm(remainder_r(part, u, v), target);
    if (r_num > 0.0) {
        if (u_low * v_high == 0.0) throw std::domain_error("product_estimate_ratios: degenerate R denominator");
        out.r_ratio = r_num / (v_high * u_low);
    }
    const double a_num = part.besov_norm(multiply(u, v), target);
    if (a_num > 0.0) {
        if (u_mid * v_mid == 0.0) throw std::domain_error("product_estimate_ratios: degenerate algebra denominator");
        out.algebra_ratio = a_num / (u_mid * v_mid);
    }
    return out;
}

}  // namespace bmhd
