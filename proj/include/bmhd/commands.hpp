#pragma once

#include <optional>
#include <string>

#include "bmhd/calibrate.hpp"

namespace bmhd::cmd {

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeViolation = 3;  // NaN / divergence / CFL
constexpr int kCheckFailure = 4;

struct Overrides {
    std::optional<std::string> out_dir;
    std::optional<std::string> constants_path;
    std::optional<std::uint64_t> seed;
};

int simulate(const std::string& config_path, const Overrides& o);
int calderon(const std::string& config_path, const Overrides& o);
int verify(const std::string& config_path, const std::string& series_path, const Overrides& o);

struct CalibrateOptions {
    CalibrationSpec spec;
    std::string out_path = "constants.json";
};
int calibrate_table(const CalibrateOptions& o);

int partition_check(int dim, int n, double length);
int plot(const std::string& series_path, const std::string& out_dir,
         const std::optional<std::string>& config_path);

}  // namespace bmhd::cmd
