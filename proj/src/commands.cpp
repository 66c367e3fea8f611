#include "bmhd/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include "bmhd/calderon.hpp"
#include "bmhd/checkpoint.hpp"
#include "bmhd/config_file.hpp"
#include "bmhd/estimates.hpp"
#include "bmhd/io_util.hpp"
#include "bmhd/paraproduct.hpp"
#include "bmhd/series_io.hpp"
#include "bmhd/svg_plot.hpp"
#include "bmhd/initial_data.hpp"
#include "json.hpp"

namespace bmhd::cmd {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig load_with_overrides(const std::string& config_path, const Overrides& o) {
    RunConfig cfg = load_run_config(config_path);
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.constants_path) cfg.constants_path = *o.constants_path;
    if (o.seed) {
        cfg.solver.seed = *o.seed;
        cfg.init.seed = *o.seed;
    }
    return cfg;
}

json report_json(const CheckReport& r) {
    json j{{"name", r.name},
           {"passed", r.passed},
           {"max_ratio", r.max_ratio},
           {"samples", r.samples},
           {"violations", json::array()}};
    for (const auto& v : r.violations)
        j["violations"].push_back(json{{"t", v.t}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    return j;
}

// Emits one pass/fail line per check; violation records go to stderr.
bool emit_reports(const std::vector<CheckReport>& reports, json& out) {
    bool all_ok = true;
    for (const auto& r : reports) {
        out.push_back(report_json(r));
        std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  worst ratio "
                  << r.max_ratio << " over " << r.samples << " samples\n";
        if (!r.passed) {
            all_ok = false;
            for (const auto& v : r.violations)
                std::cerr << "violation " << r.name << " t=" << format_double(v.t)
                          << " lhs=" << format_double(v.lhs) << " rhs=" << format_double(v.rhs) << "\n";
        }
    }
    return all_ok;
}

json budget_json(const ExistenceBudget& b) {
    return json{{"dim", b.dim}, {"m1", b.m1},     {"m2", b.m2}, {"m3", b.m3}, {"m4", b.m4},
                {"cstar", b.cstar}, {"t1", b.t1}, {"t2", b.t2}, {"tstar", b.tstar}};
}

ExistenceBudget make_budget(const RunConfig& cfg, const MHDState& prepared, const DyadicPartition& part,
                            const ConstantsTable& table) {
    const InitialNorms norms = initial_norms(prepared, part);
    if (cfg.dim == 2) return budget_2d(norms, cfg.solver.nu, table.dim2);
    const auto t1 = find_t1(prepared.u, cfg.solver.nu, table.dim3.c3, table.dim3.c4, cfg.solver.radius);
    return budget_3d(norms, cfg.solver.nu, table.dim3, t1.t1);
}

}  // namespace

int simulate(const std::string& config_path, const Overrides& o) {
    const RunConfig cfg = load_with_overrides(config_path, o);
    auto grid = make_grid(cfg.dim, cfg.n, cfg.length);
    auto data = make_initial_data(grid, cfg.init);
    MHDState initial = prepare_initial_state(MHDState(data.u, data.B), cfg.solver);
    write_checkpoint((fs::path(cfg.out_dir) / "state_initial.bmhd").string(), initial, cfg.solver.nu);

    RunResult result = run(initial, cfg.solver);
    write_checkpoint((fs::path(cfg.out_dir) / "state_final.bmhd").string(), result.state, cfg.solver.nu);
    write_norm_series_csv((fs::path(cfg.out_dir) / "series.csv").string(), result.series);
    std::cout << "run complete: t = " << result.state.t << ", samples = " << result.series.size()
              << ", series written to " << cfg.out_dir << "\n";
    return kOk;
}

int calderon(const std::string& config_path, const Overrides& o) {
    const RunConfig cfg = load_with_overrides(config_path, o);
    if (cfg.dim != 3) throw ConfigError("calderon: requires a 3D configuration");
    auto grid = make_grid(cfg.dim, cfg.n, cfg.length);
    auto data = make_initial_data(grid, cfg.init);
    MHDState initial = prepare_initial_state(MHDState(data.u, data.B), cfg.solver);
    write_checkpoint((fs::path(cfg.out_dir) / "state_initial.bmhd").string(), initial, cfg.solver.nu);

    RunResult result = run(initial, cfg.solver, /*with_splitting=*/true);
    write_checkpoint((fs::path(cfg.out_dir) / "state_final.bmhd").string(), result.state, cfg.solver.nu);
    write_norm_series_csv((fs::path(cfg.out_dir) / "series.csv").string(), result.series);
    write_split_series_csv((fs::path(cfg.out_dir) / "split.csv").string(), *result.split);

    if (cfg.constants_path.empty()) {
        std::cout << "splitting run complete (no constants table: piece bounds skipped)\n";
        return kOk;
    }
    const ConstantsTable table = ConstantsTable::load(cfg.constants_path);
    auto part = DyadicPartition::build(grid);
    const ExistenceBudget budget = make_budget(cfg, initial, part, table);
    auto split_checks = check_split_bounds(result.series, *result.split, table.dim3, budget);

    json out;
    out["budget"] = budget_json(budget);
    if (split_checks.stopping_time_crossing)
        out["stopping_time_crossing"] = *split_checks.stopping_time_crossing;
    out["checks"] = json::array();
    const bool ok = emit_reports(split_checks.reports, out["checks"]);
    atomic_write_text((fs::path(cfg.out_dir) / "calderon_report.json").string(), out.dump(2) + "\n");
    return ok ? kOk : kCheckFailure;
}

int verify(const std::string& config_path, const std::string& series_path, const Overrides& o) {
    const RunConfig cfg = load_with_overrides(config_path, o);
    if (cfg.constants_path.empty()) throw ConfigError("verify: constants table path required");
    const ConstantsTable table = ConstantsTable::load(cfg.constants_path);
    const DimConstants& c = table.for_dim(cfg.dim);

    NormSeries series = read_norm_series_csv(series_path);
    series.dim = cfg.dim;
    series.nu = cfg.solver.nu;
    if (series.size() == 0) throw ConfigError("verify: empty norm series");

    auto grid = make_grid(cfg.dim, cfg.n, cfg.length);
    auto data = make_initial_data(grid, cfg.init);
    MHDState initial = prepare_initial_state(MHDState(data.u, data.B), cfg.solver);
    auto part = DyadicPartition::build(grid);
    const ExistenceBudget budget = make_budget(cfg, initial, part, table);

    std::vector<CheckReport> reports;
    reports.push_back(check_energy_identity(series, 1e-6));
    reports.push_back(check_energy_inequality(series));
    if (cfg.dim == 2) reports.push_back(check_2d_aux_bound(series));
    reports.push_back(check_b_growth(series, c.c1));
    reports.push_back(check_u_estimate(series, c.c2));
    reports.push_back(check_time_derivative_bounds(series, c.deriv_bound));
    for (auto& r : bootstrap_monitor(series, budget, c)) reports.push_back(std::move(r));

    json out;
    out["budget"] = budget_json(budget);
    out["checks"] = json::array();
    const bool ok = emit_reports(reports, out["checks"]);
    atomic_write_text((fs::path(cfg.out_dir) / "verify_report.json").string(), out.dump(2) + "\n");
    std::cout << "budget: T* = " << budget.tstar << "\n";
    return ok ? kOk : kCheckFailure;
}

int calibrate_table(const CalibrateOptions& o) {
    const ConstantsTable table = calibrate(o.spec);
    table.save(o.out_path);
    std::cout << "constants written to " << o.out_path << "\n";
    std::cout << "  dim2: c1 = " << table.dim2.c1 << ", c2 = " << table.dim2.c2
              << ", algebra = " << table.dim2.algebra << "\n";
    std::cout << "  dim3: c1 = " << table.dim3.c1 << ", c2 = " << table.dim3.c2
              << ", c3 = " << table.dim3.c3 << ", c4 = " << table.dim3.c4 << "\n";
    return kOk;
}

int partition_check(int dim, int n, double length) {
    auto grid = make_grid(dim, n, length);
    auto part = DyadicPartition::build(grid);

    CheckReport identities{"partition_identities"};
    for (std::size_t i = 0; i < grid->size(); ++i) {
        if (grid->on_nyquist(i)) continue;
        double hom = 0.0, hom_sq = 0.0;
        double inhom = part.chi_values()[i];
        double inhom_sq = inhom * inhom;
        for (int j = part.jmin(); j <= part.jmax(); ++j) {
            const double v = part.phi_values(j)[i];
            hom += v;
            hom_sq += v * v;
            if (j >= 0) {
                inhom += v;
                inhom_sq += v * v;
            }
        }
        ++identities.samples;
        double defect = std::abs(inhom - 1.0);
        if (i != 0) defect = std::max(defect, std::abs(hom - 1.0));
        identities.max_ratio = std::max(identities.max_ratio, defect / 1e-12);
        bool ok = defect <= 1e-12;
        ok = ok && inhom_sq >= 0.5 - 1e-12 && inhom_sq <= 1.0 + 1e-12;
        if (i != 0) ok = ok && hom_sq >= 0.5 - 1e-12 && hom_sq <= 1.0 + 1e-12;
        if (!ok) {
            identities.passed = false;
            if (identities.violations.size() < 8)
                identities.violations.push_back({std::sqrt(grid->xi_sq(i)), defect, 1e-12});
        }
    }

    CheckReport bony{"bony_reconstruction"};
    CheckReport embed{"embedding_monotonicity"};
    for (std::uint64_t s = 0; s < 4; ++s) {
        auto u = random_scalar_field(grid, 1.5 + 0.4 * static_cast<double>(s), 9100 + s);
        auto v = random_scalar_field(grid, 2.0, 9200 + s);
        const double err = bony_reconstruction_error(part, u, v);
        ++bony.samples;
        bony.max_ratio = std::max(bony.max_ratio, err / 1e-11);
        if (err > 1e-11) {
            bony.passed = false;
            bony.violations.push_back({static_cast<double>(s), err, 1e-11});
        }
        const double r = embedding_ratio(u, part, EmbeddingTarget::besov_n2_2_inf);
        ++embed.samples;
        embed.max_ratio = std::max(embed.max_ratio, r);
        if (r > 1.0 + 1e-12) {
            embed.passed = false;
            embed.violations.push_back({static_cast<double>(s), r, 1.0});
        }
    }

    json out;
    out["checks"] = json::array();
    const bool ok = emit_reports({identities, bony, embed}, out["checks"]);
    return ok ? kOk : kCheckFailure;
}

int plot(const std::string& series_path, const std::string& out_dir,
         const std::optional<std::string>& config_path) {
    const NormSeries s = read_norm_series_csv(series_path);
    if (s.size() == 0) throw ConfigError("plot: empty series");

    std::vector<PlotCurve> norms;
    norms.push_back({"||u||_L2", s.t, s.l2_u});
    norms.push_back({"||B||_L2", s.t, s.l2_B});
    norms.push_back({"||grad u||_L2", s.t, s.l2_grad_u});
    norms.push_back({"||u|| low Besov", s.t, s.besov_u_low});
    norms.push_back({"||u|| mid Besov", s.t, s.besov_u_mid});
    norms.push_back({"||B|| mid Besov", s.t, s.besov_B});
    write_svg_chart((fs::path(out_dir) / "norms.svg").string(), "norm trajectories", norms);

    std::vector<PlotCurve> integrals;
    integrals.push_back({"X_R", s.t, s.xr});
    integrals.push_back({"Y_R", s.t, s.yr});
    integrals.push_back({"Z_R", s.t, s.zr});
    integrals.push_back({"int ||u||^2_{H^{n/2}}", s.t, s.int_u_hn2_sq});
    write_svg_chart((fs::path(out_dir) / "integrals.svg").string(), "running integrals", integrals);

    if (config_path) {
        const RunConfig cfg = load_run_config(*config_path);
        const double e0 = s.l2_u.front() * s.l2_u.front() + s.l2_B.front() * s.l2_B.front();
        PlotCurve lhs{"E(t) + 2 nu int ||grad u||^2", s.t, {}};
        PlotCurve rhs{"E(0)", s.t, std::vector<double>(s.size(), e0)};
        double dissip = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (k > 0)
                dissip += 0.5 * (s.t[k] - s.t[k - 1]) *
                          (s.l2_grad_u[k - 1] * s.l2_grad_u[k - 1] + s.l2_grad_u[k] * s.l2_grad_u[k]);
            lhs.y.push_back(s.l2_u[k] * s.l2_u[k] + s.l2_B[k] * s.l2_B[k] +
                            2.0 * cfg.solver.nu * dissip);
        }
        write_svg_chart((fs::path(out_dir) / "energy_pair.svg").string(),
                        "energy identity, left and right sides", {lhs, rhs});
    }
    return kOk;
}

}  // namespace bmhd::cmd
