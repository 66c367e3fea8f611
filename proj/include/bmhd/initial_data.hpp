#pragma once

#include <cstdint>
#include <string>

#include "bmhd/field.hpp"

namespace bmhd {

enum class InitKind { orszag_tang, abc_like, random_spectrum };

InitKind parse_init_kind(const std::string& name);

struct InitParams {
    InitKind kind = InitKind::orszag_tang;
    double amplitude_u = 1.0;
    double amplitude_B = 1.0;
    // random_spectrum: |u-hat| ~ amplitude * |xi|^{-alpha} up to the cutoff
    double alpha_u = 2.5;
    double alpha_B = 3.0;
    double cutoff = 0.0;  // 0 = no cutoff beyond the lattice
    std::uint64_t seed = 1;
};

struct InitialData {
    VectorField u;
    VectorField B;
};

// Divergence-free, zero-mean, Hermitian initial fields.  orszag_tang is 2D
// (stream functions), abc_like is 3D, random_spectrum works in both.
InitialData make_initial_data(GridPtr grid, const InitParams& params);

// Zero-mean Hermitian scalar with |coeff| ~ amplitude |xi|^{-alpha} and
// uniform phases; the scalar building block of the calibration corpus.
ScalarField random_scalar_field(GridPtr grid, double alpha, std::uint64_t seed, double amplitude = 1.0);

}  // namespace bmhd
