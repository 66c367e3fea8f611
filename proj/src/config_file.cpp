#include "bmhd/config_file.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace bmhd {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
    return out;
}

long parse_int(const std::string& key, const std::string& value) {
    long out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError("config: bad integer value for " + key + ": '" + value + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError("config: bad seed value for " + key + ": '" + value + "'");
    return out;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    bool init_seed_set = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "solver" && section != "init" && section != "output" &&
                section != "constants")
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string scoped = section + "." + key;

        if (scoped == "grid.dim") cfg.dim = static_cast<int>(parse_int(scoped, value));
        else if (scoped == "grid.n") cfg.n = static_cast<int>(parse_int(scoped, value));
        else if (scoped == "grid.length") cfg.length = parse_double(scoped, value);
        else if (scoped == "solver.nu") cfg.solver.nu = parse_double(scoped, value);
        else if (scoped == "solver.dt") cfg.solver.dt = parse_double(scoped, value);
        else if (scoped == "solver.t_end") cfg.solver.t_end = parse_double(scoped, value);
        else if (scoped == "solver.radius") {
            if (value == "full") cfg.solver.radius = std::numeric_limits<double>::infinity();
            else cfg.solver.radius = parse_double(scoped, value);
        } else if (scoped == "solver.dealias") {
            if (value == "padded") cfg.solver.dealias = Dealias::padded;
            else if (value == "two_thirds") cfg.solver.dealias = Dealias::two_thirds;
            else throw ConfigError("config: dealias must be 'padded' or 'two_thirds'");
        } else if (scoped == "solver.sample_every") cfg.solver.sample_every = static_cast<int>(parse_int(scoped, value));
        else if (scoped == "solver.integrator") {
            if (value != "if_rk4") throw ConfigError("config: the only integrator is 'if_rk4'");
        } else if (scoped == "solver.seed") cfg.solver.seed = parse_u64(scoped, value);
        else if (scoped == "init.kind") cfg.init.kind = parse_init_kind(value);
        else if (scoped == "init.amplitude_u") cfg.init.amplitude_u = parse_double(scoped, value);
        else if (scoped == "init.amplitude_B") cfg.init.amplitude_B = parse_double(scoped, value);
        else if (scoped == "init.alpha_u") cfg.init.alpha_u = parse_double(scoped, value);
        else if (scoped == "init.alpha_B") cfg.init.alpha_B = parse_double(scoped, value);
        else if (scoped == "init.cutoff") cfg.init.cutoff = parse_double(scoped, value);
        else if (scoped == "init.seed") {
            cfg.init.seed = parse_u64(scoped, value);
            init_seed_set = true;
        } else if (scoped == "output.dir") cfg.out_dir = value;
        else if (scoped == "constants.path") cfg.constants_path = value;
        else throw ConfigError("config: unknown key '" + key + "' in section [" + section + "]");
    }
    if (!init_seed_set) cfg.init.seed = cfg.solver.seed;

    if (cfg.dim != 2 && cfg.dim != 3) throw ConfigError("config: grid.dim must be 2 or 3");
    if (cfg.n < 8 || cfg.n % 2 != 0) throw ConfigError("config: grid.n must be even and >= 8");
    if (!(cfg.length > 0.0)) throw ConfigError("config: grid.length must be positive");
    if (!(cfg.solver.nu > 0.0)) throw ConfigError("config: solver.nu must be positive");
    if (!(cfg.solver.dt > 0.0)) throw ConfigError("config: solver.dt must be positive");
    if (!(cfg.solver.t_end > 0.0)) throw ConfigError("config: solver.t_end must be positive");
    if (cfg.solver.sample_every < 1) throw ConfigError("config: solver.sample_every must be >= 1");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config_text(ss.str());
}

}  // namespace bmhd
