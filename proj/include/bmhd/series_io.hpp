#pragma once

#include <string>

#include "bmhd/solver.hpp"

namespace bmhd {

// CSV with a fixed header row (first column t) and 17-significant-digit
// locale-independent floats.  Writes are atomic.
void write_norm_series_csv(const std::string& path, const NormSeries& series);
void write_split_series_csv(const std::string& path, const SplitSeries& series);

// Readers validate the header against the fixed schema.  dim and nu are not
// part of the file; callers restore them from the run configuration.
NormSeries read_norm_series_csv(const std::string& path);
SplitSeries read_split_series_csv(const std::string& path);

}  // namespace bmhd
