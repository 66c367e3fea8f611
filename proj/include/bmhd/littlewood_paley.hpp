#pragma once

#include <span>
#include <vector>

#include "bmhd/field.hpp"

namespace bmhd {

// Besov index (s, p, r).  p is restricted to {1, 2, 3, 6, inf} and r to
// {1, 2, inf}; homogeneous norms act on the zero-mean part of a field.
struct BesovIndex {
    double s = 0.0;
    double p = 2.0;
    double r = 1.0;
    bool homogeneous = true;
};

// Dyadic partition of unity sampled on the lattice.  The radial profiles are
//   chi(rho)  = 1 on rho <= 3/4, 0 on rho >= 4/3, glued by the exponential
//               smooth step s(t) = a(t)/(a(t)+a(1-t)), a(t) = exp(-1/t);
//   phi(rho)  = chi(rho/2) - chi(rho),   supported in 3/4 <= rho <= 8/3,
// and phi_j(xi) = phi(2^{-j} |xi|).  [jmin, jmax] is the minimal integer
// range whose block supports cover every nonzero lattice frequency, so the
// homogeneous identity sum_j phi_j = 1 is exact on the lattice.
class DyadicPartition {
  public:
    static DyadicPartition build(GridPtr grid);

    const FourierGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int jmin() const { return jmin_; }
    int jmax() const { return jmax_; }

    // Radial profiles (used by the partition checks and tests).
    static double chi_profile(double rho);
    static double phi_profile(double rho);

    // Lattice samples of phi_j; empty outside [jmin, jmax].
    std::span<const double> phi_values(int j) const;
    // Lattice samples of chi (the j = -1 inhomogeneous multiplier).
    std::span<const double> chi_values() const { return chi_; }

    // Homogeneous block (Delta-dot_j); zero field outside [jmin, jmax].
    ScalarField hom_block(const ScalarField& f, int j) const;
    VectorField hom_block(const VectorField& v, int j) const;

    // Homogeneous cut-off (S-dot_j = sum_{j' <= j-1} blocks) plus the
    // separately tracked mean as the constant part.
    ScalarField hom_cutoff(const ScalarField& f, int j) const;
    VectorField hom_cutoff(const VectorField& v, int j) const;

    // Inhomogeneous block: 0 for j <= -2, the chi multiplier at j = -1,
    // phi_j for j >= 0.
    ScalarField inhom_block(const ScalarField& f, int j) const;

    // ||Delta-dot_j f||_{L^p}; vector spans aggregate components (Euclidean
    // magnitude pointwise for p != 2).
    double block_lp_norm(const ScalarField& f, int j, double p) const;
    double block_lp_norm(std::span<const ScalarField> fs, int j, double p) const;

    double besov_norm(const ScalarField& f, const BesovIndex& idx) const;
    double besov_norm(std::span<const ScalarField> fs, const BesovIndex& idx) const;
    double besov_norm(const VectorField& v, const BesovIndex& idx) const;

  private:
    explicit DyadicPartition(GridPtr grid) : grid_(std::move(grid)) {}

    double inhom_block_lp_norm(std::span<const ScalarField> fs, int j, double p) const;

    GridPtr grid_;
    int jmin_ = 0, jmax_ = -1;
    std::vector<std::vector<double>> phi_;   // per j, lattice samples
    std::vector<std::vector<double>> cum_;   // cum_[j] = sum_{j' <= j} phi_{j'}
    std::vector<double> chi_;
};

// Supported embedding targets (the pairs the estimates use, all from the
// source space B-dot^{n/2}_{2,1}).
enum class EmbeddingTarget { lebesgue_inf, besov_0_inf_inf, besov_n2_2_inf };

// ||f||_target / ||f||_source for source B-dot^{n/2}_{2,1}; returns 0 when
// both norms vanish.
double embedding_ratio(const ScalarField& f, const DyadicPartition& part, EmbeddingTarget target);
double embedding_ratio(const VectorField& f, const DyadicPartition& part, EmbeddingTarget target);

}  // namespace bmhd
