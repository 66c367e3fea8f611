#pragma once

#include "bmhd/littlewood_paley.hpp"

namespace bmhd {

// Bony decomposition of the pointwise product:
//   u v = T_uv + T_vu + R_uv + mean(u) mean(v),
// where the paraproducts absorb the means through the cut-offs.  All products
// are alias-free.  Reconstruction is exact (to round-off) against the padded
// product of the same fields.
struct BonyTriple {
    ScalarField t_uv;  // paraproduct of v by u (low u, high v)
    ScalarField t_vu;  // paraproduct of u by v
    ScalarField r_uv;  // remainder, |k - j| <= 1
};

// T_u v = sum_j S-dot_{j-1} u * Delta-dot_j v.
ScalarField para_t(const DyadicPartition& part, const ScalarField& u, const ScalarField& v);

// R(u, v) = sum_{|k-j| <= 1} Delta-dot_k u * Delta-dot_j v.
ScalarField remainder_r(const DyadicPartition& part, const ScalarField& u, const ScalarField& v);

BonyTriple bony_decompose(const DyadicPartition& part, const ScalarField& u, const ScalarField& v);

// || T_uv + T_vu + R_uv - (uv - mean(u) mean(v)) ||_L2 / ||uv||_L2.
double bony_reconstruction_error(const DyadicPartition& part, const ScalarField& u, const ScalarField& v);

// Commutator Q_j = [(vel . grad), Delta-dot_j] f for divergence-free vel.
ScalarField commutator_qj(const DyadicPartition& part, const VectorField& vel, const ScalarField& f, int j);

// The proof-internal split of the transport paraproduct: block j of the
// T-part of (u . grad) b decomposes as
//   sum_{j'} Delta_j (S_{j'-1} u . grad Delta_{j'} b)
//     = (S_{j-1} u . grad) Delta_j b  +  P_j  +  Q_j,
// with P_j collecting the two |j - j'| <= 1 neighbour terms and Q_j the
// commutators.  The three returned fields satisfy that identity exactly.
struct AdvectionBlockSplit {
    ScalarField transport;
    ScalarField p_j;
    ScalarField q_j;
};

AdvectionBlockSplit advection_block_decomposition(const DyadicPartition& part, const VectorField& u,
                                                  const ScalarField& b_comp, int j);

// Left side of the identity above (the oracle for the decomposition tests).
ScalarField advection_t_part_block(const DyadicPartition& part, const VectorField& u,
                                   const ScalarField& b_comp, int j);

// Empirical constants for the product estimates the a priori bounds use:
//   t_ratio:      ||T_u v||_{B^{n/2}_{2,1}} / (||u||_{B^{-1}_{inf,inf}} ||v||_{B^{n/2+1}_{2,1}})
//   r_ratio:      ||R(u, v)||_{B^{n/2}_{2,1}} / (||v||_{B^{n/2+1}_{2,1}} ||u||_{B^{-1}_{inf,inf}})
//   algebra_ratio: ||u v||_{B^{n/2}_{2,1}} / (||u||_{B^{n/2}_{2,1}} ||v||_{B^{n/2}_{2,1}})
// (all homogeneous norms).  Ratios are 0 when the product side vanishes and
// a degenerate denominator throws.
struct ProductEstimateRatios {
    double t_ratio;
    double r_ratio;
    double algebra_ratio;
};

ProductEstimateRatios product_estimate_ratios(const DyadicPartition& part, const ScalarField& u,
                                              const ScalarField& v);

}  // namespace bmhd
