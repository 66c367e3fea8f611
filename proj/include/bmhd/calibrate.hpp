#pragma once

#include "bmhd/constants_table.hpp"
#include "bmhd/littlewood_paley.hpp"

namespace bmhd {

struct CalibrationSpec {
    int n2d = 32;
    int n3d = 16;
    double box_length = 0.0;  // 0 = 2*pi
    int fields = 50;          // random fields per dimension, slopes in [alpha_lo, alpha_hi]
    int snapshots = 12;       // solver states sampled from short runs, per dimension
    double alpha_lo = 1.5;
    double alpha_hi = 3.5;
    std::uint64_t seed = 2024;
    double margin = 1.1;
};

// Raw estimate ratios of a single divergence-free state (the quantities the
// corpus sweep maximizes).  Every ratio is invariant under scaling the pair
// (u, B) by a common factor.
DimConstants state_ratios(const DyadicPartition& part, const VectorField& u, const VectorField& B);

// Sweeps the random-field corpus and short solver runs, records the maximum
// of every estimate ratio, and freezes constants as max * margin.
// Deterministic for a fixed spec.
ConstantsTable calibrate(const CalibrationSpec& spec);

}  // namespace bmhd
