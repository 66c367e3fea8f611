#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bmhd/commands.hpp"
#include "bmhd/config_file.hpp"
#include "bmhd/solver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bmhd: pseudo-spectral non-resistive MHD laboratory"};
    app.require_subcommand(1);

    std::string config_path, series_path, out_dir = "out", constants_out = "constants.json";
    std::optional<std::string> out_override, constants_override, plot_config;
    std::optional<std::uint64_t> seed_override;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config) sub->add_option("--config", config_path, "run configuration file")->required();
        auto* out = sub->add_option("--out", "output directory (overrides config)");
        out->each([&](const std::string& v) { out_override = v; });
        auto* con = sub->add_option("--constants", "constants table path (overrides config)");
        con->each([&](const std::string& v) { constants_override = v; });
        auto* seed = sub->add_option("--seed", "RNG seed (overrides config)");
        seed->each([&](const std::string& v) { seed_override = std::stoull(v); });
    };

    auto* sim = app.add_subcommand("simulate", "integrate the truncated MHD system");
    add_common(sim, true);

    auto* cal = app.add_subcommand("calderon", "3D run with lockstep Calderon splitting");
    add_common(cal, true);

    auto* ver = app.add_subcommand("verify", "budgets, bootstrap monitor and estimate checks");
    add_common(ver, true);
    ver->add_option("--series", series_path, "norm series CSV")->required();

    auto* calib = app.add_subcommand("calibrate", "calibrate the estimate constants");
    bmhd::cmd::CalibrateOptions copt;
    calib->add_option("--out", constants_out, "constants table output path");
    calib->add_option("--fields", copt.spec.fields, "random fields per dimension");
    calib->add_option("--snapshots", copt.spec.snapshots, "solver snapshots per dimension");
    calib->add_option("--n2d", copt.spec.n2d, "2D corpus grid size");
    calib->add_option("--n3d", copt.spec.n3d, "3D corpus grid size");
    calib->add_option("--seed", copt.spec.seed, "corpus seed");

    auto* pc = app.add_subcommand("partition-check", "partition/paraproduct invariant suite");
    int pc_dim = 2, pc_n = 64;
    double pc_length = 6.283185307179586;
    pc->add_option("--dim", pc_dim, "spatial dimension");
    pc->add_option("--n", pc_n, "modes per axis");
    pc->add_option("--length", pc_length, "box length");

    auto* pl = app.add_subcommand("plot", "emit SVG charts from a norm series");
    pl->add_option("--series", series_path, "norm series CSV")->required();
    pl->add_option("--out", out_dir, "output directory");
    std::string plot_cfg_path;
    auto* pc_opt = pl->add_option("--config", plot_cfg_path, "run config (enables the energy pair chart)");

    CLI11_PARSE(app, argc, argv);

    const bmhd::cmd::Overrides overrides{out_override, constants_override, seed_override};
    try {
        if (sim->parsed()) return bmhd::cmd::simulate(config_path, overrides);
        if (cal->parsed()) return bmhd::cmd::calderon(config_path, overrides);
        if (ver->parsed()) return bmhd::cmd::verify(config_path, series_path, overrides);
        if (calib->parsed()) {
            copt.out_path = constants_out;
            return bmhd::cmd::calibrate_table(copt);
        }
        if (pc->parsed()) return bmhd::cmd::partition_check(pc_dim, pc_n, pc_length);
        if (pl->parsed()) {
            if (pc_opt->count() > 0) plot_config = plot_cfg_path;
            return bmhd::cmd::plot(series_path, out_dir, plot_config);
        }
    } catch (const bmhd::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return bmhd::cmd::kRuntimeViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bmhd::cmd::kConfigError;
    }
    return bmhd::cmd::kConfigError;
}
