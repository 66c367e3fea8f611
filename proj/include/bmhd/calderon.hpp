#pragma once

#include <limits>

#include "bmhd/field.hpp"

namespace bmhd {

// Per-rate compression of a heat flow: ||h(t)||^2_{Hdot^s} is a finite sum
// sum_c (xi^2_c)^s w_c exp(-2 nu xi^2_c t) over distinct |xi|^2 classes, so
// the Stokes/heat piece of the Calderon splitting has closed-form norms.
struct HeatSpectrum {
    std::vector<double> xi_sq;   // distinct |xi|^2 > 0
    std::vector<double> weight;  // sum of |u0-hat|^2 / L^dim per class
    double nu = 1.0;
};

HeatSpectrum heat_spectrum(const VectorField& u0, double nu,
                           double radius = std::numeric_limits<double>::infinity());

// h-hat(xi, t) = exp(-nu |xi|^2 t) u0-hat(xi), restricted to B_R.
VectorField solve_heat(const VectorField& u0, double nu, double t,
                       double radius = std::numeric_limits<double>::infinity());

// ||h(t)||^2_{Hdot^s} and its exact time integral over [0, t].
double heat_sobolev_sq(const HeatSpectrum& hs, double s, double t);
double heat_sobolev_sq_integral(const HeatSpectrum& hs, double s, double t);

// int_0^T ||h(s)||^4_{Hdot^1} ds by adaptive Simpson quadrature on the
// compressed spectrum (relative error <= 1e-9); T = inf integrates the tail
// analytically once the integrand is in its slowest-decaying regime.
double heat_h1_quartic_integral(const HeatSpectrum& hs, double t_end);
double heat_h1_quartic_integral_inf(const HeatSpectrum& hs);

// Largest T1 with int_0^{T1} ||h||^4_{Hdot^1} < nu^3 / (16 c3 c4); unbounded
// when even the full integral stays below the threshold.
struct T1Result {
    double t1 = std::numeric_limits<double>::infinity();
    bool unbounded = false;
};

T1Result find_t1(const VectorField& u0, double nu, double c3, double c4,
                 double radius = std::numeric_limits<double>::infinity());

}  // namespace bmhd
