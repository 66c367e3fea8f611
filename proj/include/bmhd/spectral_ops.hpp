#pragma once

#include <span>
#include <vector>

#include "bmhd/field.hpp"

namespace bmhd {

enum class Dealias { padded, two_thirds };

// --- transforms ------------------------------------------------------------

// Forward transform of physical samples (row-major, N^dim values).  Carries
// the quadrature weight (L/N)^dim and projects onto the Nyquist-free
// Hermitian band, so the result always satisfies the ScalarField invariants.
ScalarField transform_forward(GridPtr grid, std::span<const double> samples);

// Physical samples of a spectral field (row-major, N^dim values).
std::vector<double> transform_inverse(const ScalarField& f);

// --- multiplier operators --------------------------------------------------

// d/dx_axis (multiplier i*xi_axis).
ScalarField derivative(const ScalarField& f, int axis);

// Lambda^s = |nabla|^s; the zero mode maps to 0.  Throws std::domain_error
// for s < 0 on fields with nonzero mean.
ScalarField fractional_laplacian(const ScalarField& f, double s);
VectorField fractional_laplacian(const VectorField& v, double s);

ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);

// All dim^2 partial derivatives d_i v_j, row-major in (i, j).
std::vector<ScalarField> gradient(const VectorField& v);
std::vector<ScalarField> gradient(const ScalarField& f);

// Frequency-wise projection onto divergence-free fields; zero mode unchanged.
VectorField leray_project(const VectorField& v);

// Sharp Fourier truncation to the ball |xi| <= R.
ScalarField fourier_truncate(const ScalarField& f, double radius);
VectorField fourier_truncate(const VectorField& v, double radius);

// --- dealiased products ----------------------------------------------------

// Pointwise product computed on a zero-padded grid (>= 3N/2 per axis) so the
// quadratic convolution is alias-free, then truncated back to the band.
ScalarField multiply(const ScalarField& f, const ScalarField& g);

// (u . grad) f and (u . grad) v, alias-free.
ScalarField advect_scalar(const VectorField& u, const ScalarField& f);
VectorField advect(const VectorField& u, const VectorField& v);

// div(u (x) v), component i = sum_j d_j (u_j v_i).  Equals advect(u, v) when
// div u = 0 and needs fewer transforms; the solver uses this form.
VectorField advect_div_form(const VectorField& u, const VectorField& v);

// Same-grid products with the 2/3-rule mask instead of padding.  Exactness
// requires both factors inside the retained band (|k_i| < N/3 per axis);
// the solver keeps its state there in this mode.
ScalarField multiply_two_thirds(const ScalarField& f, const ScalarField& g);
VectorField advect_div_form_two_thirds(const VectorField& u, const VectorField& v);
void apply_two_thirds_mask(ScalarField& f);
void apply_two_thirds_mask(VectorField& v);

// --- norms and pairings ----------------------------------------------------

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
double l2_norm(std::span<const ScalarField> fs);

// L^2 inner product (Parseval side).
double inner_product(const ScalarField& f, const ScalarField& g);
double inner_product(const VectorField& v, const VectorField& w);

// Sobolev norm: homogeneous |xi|^s acts on the zero-mean part; inhomogeneous
// uses the weight (1 + |xi|^2)^{s/2}.
double sobolev_norm(const ScalarField& f, double s, bool homogeneous);
double sobolev_norm(const VectorField& v, double s, bool homogeneous);
double sobolev_norm(std::span<const ScalarField> fs, double s, bool homogeneous);

// Physical-space L^p norm by grid quadrature; p in {1, 2, 3, 6, inf}.
// Vector fields use the pointwise Euclidean magnitude.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);

// max over grid points of the pointwise magnitude (the L^inf norm).
double max_abs(const VectorField& v);

namespace detail {

// Zero-padding machinery shared with the solver's batched nonlinear terms.
int padded_size(int n);
std::vector<double> to_fine_physical(const ScalarField& f, int m);
ScalarField from_fine_physical(GridPtr grid, std::span<const double> fine, int m);

}  // namespace detail

}  // namespace bmhd
