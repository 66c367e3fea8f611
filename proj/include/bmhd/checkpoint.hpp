#pragma once

#include <string>

#include "bmhd/solver.hpp"

namespace bmhd {

// Binary state snapshot.  Layout (little endian):
//   magic "BMHD" | u32 version = 1 | u8 dim | u32 N |
//   f64 L | f64 t | f64 nu |
//   coefficients as (re, im) f64 pairs in row-major wavevector order,
//   u components first, then B components.
struct Checkpoint {
    MHDState state;
    double nu = 0.0;
};

void write_checkpoint(const std::string& path, const MHDState& state, double nu);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace bmhd
