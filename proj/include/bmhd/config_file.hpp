#pragma once

#include <stdexcept>
#include <string>

#include "bmhd/initial_data.hpp"
#include "bmhd/solver.hpp"

namespace bmhd {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value configuration with [sections]; '#' starts a comment.
// Unknown sections or keys are rejected.
struct RunConfig {
    int dim = 2;
    int n = 64;
    double length = 6.283185307179586;  // 2*pi
    SolverConfig solver;
    InitParams init;
    std::string out_dir = "out";
    std::string constants_path;
};

RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace bmhd
