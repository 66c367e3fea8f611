// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Pinned tolerances live next to each check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bmhd/calderon.hpp"
#include "bmhd/calibrate.hpp"
#include "bmhd/commands.hpp"
#include "bmhd/estimates.hpp"
#include "bmhd/initial_data.hpp"
#include "bmhd/io_util.hpp"
#include "bmhd/paraproduct.hpp"
#include "bmhd/series_io.hpp"
#include "bmhd/solver.hpp"

using namespace bmhd;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

namespace {

struct Criterion {
    int id;
    std::string label;
    bool passed = true;
    std::string detail;
    double seconds = 0.0;
};

std::vector<Criterion> g_results;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void record(int id, const std::string& label, bool passed, const std::string& detail, double secs) {
    g_results.push_back({id, label, passed, detail, secs});
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

ScalarField random_zero_mean_scalar(GridPtr grid, double alpha, std::uint64_t seed) {
    return random_scalar_field(std::move(grid), alpha, seed);
}

// --- criterion 1: partition identities -------------------------------------

void criterion_partition() {
    Timer timer;
    bool ok = true;
    double worst = 0.0;
    for (auto [dim, n] : {std::pair{2, 128}, std::pair{3, 32}}) {
        auto grid = make_grid(dim, n, 2.0 * kPi);
        auto part = DyadicPartition::build(grid);
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
            double defect = std::abs(inhom - 1.0);
            if (i != 0) defect = std::max(defect, std::abs(hom - 1.0));
            worst = std::max(worst, defect);
            ok = ok && defect <= 1e-12;
            ok = ok && inhom_sq >= 0.5 - 1e-12 && inhom_sq <= 1.0 + 1e-12;
            if (i != 0) ok = ok && hom_sq >= 0.5 - 1e-12 && hom_sq <= 1.0 + 1e-12;
        }
    }
    record(1, "partition identities (2D N=128, 3D N=32)", ok, "worst defect " + fmt(worst),
           timer.seconds());
}

// --- criterion 2: Bony reconstruction vs dense convolution ------------------

void criterion_bony() {
    Timer timer;
    bool ok = true;
    double worst = 0.0;
    auto run_pairs = [&](int dim, int n, std::uint64_t base) {
        auto grid = make_grid(dim, n, 2.0 * kPi);
        auto part = DyadicPartition::build(grid);
        for (int p = 0; p < 10; ++p) {
            auto u = random_zero_mean_scalar(grid, 1.0 + 0.1 * p, base + 2 * p);
            auto v = random_zero_mean_scalar(grid, 1.4, base + 2 * p + 1);
            auto triple = bony_decompose(part, u, v);
            const auto sum = triple.t_uv + triple.t_vu + triple.r_uv;

            // dense convolution oracle for the exact product
            ScalarField oracle(grid);
            const auto& g = *grid;
            for (std::size_t i1 = 0; i1 < g.size(); ++i1) {
                if (u[i1] == Complex{0.0, 0.0}) continue;
                const auto a = g.unflatten(i1);
                for (std::size_t i2 = 0; i2 < g.size(); ++i2) {
                    if (v[i2] == Complex{0.0, 0.0}) continue;
                    const auto b = g.unflatten(i2);
                    std::array<int, 3> kk{0, 0, 0};
                    for (int d = 0; d < dim; ++d) {
                        const int k1 = (a[d] <= n / 2) ? a[d] : a[d] - n;
                        const int k2 = (b[d] <= n / 2) ? b[d] : b[d] - n;
                        kk[d] = k1 + k2;
                    }
                    const std::size_t flat = g.index_of_wavevector(kk);
                    if (flat >= g.size() || g.on_nyquist(flat)) continue;
                    oracle[flat] += u[i1] * v[i2];
                }
            }
            for (auto& cc : oracle.coeffs()) cc /= g.volume();

            const double rel = l2_norm(sum - oracle) / l2_norm(oracle);
            worst = std::max(worst, rel);
            ok = ok && rel <= 1e-11;
        }
    };
    run_pairs(2, 16, 9000);
    run_pairs(3, 8, 9500);
    record(2, "Bony reconstruction vs dense convolution (20 pairs)", ok, "worst rel err " + fmt(worst),
           timer.seconds());
}

// --- criteria 3 and 4: 2D energy run -----------------------------------------

RunResult energy_run_2d() {
    auto grid = make_grid(2, 64, 2.0 * kPi);
    InitParams p;
    p.kind = InitKind::orszag_tang;
    auto data = make_initial_data(grid, p);
    SolverConfig cfg;
    cfg.nu = 0.01;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    return run(MHDState{data.u, data.B}, cfg);
}

void criterion_energy(const RunResult& res) {
    Timer timer;
    auto identity = check_energy_identity(res.series, 1e-6);
    auto inequality = check_energy_inequality(res.series);
    record(3, "Galerkin energy identity (2D OT, N=64, t<=0.5)", identity.passed && inequality.passed,
           "identity worst " + fmt(identity.max_ratio) + " of tolerance, inequality worst " +
               fmt(inequality.max_ratio),
           timer.seconds());

    auto aux = check_2d_aux_bound(res.series);
    record(4, "2D auxiliary H^1 bound on the same run", aux.passed, "worst ratio " + fmt(aux.max_ratio),
           0.0);
}

// --- criterion 5: heat piece identities --------------------------------------

void criterion_heat() {
    Timer timer;
    auto grid = make_grid(3, 32, 2.0 * kPi);
    const double nu = 0.05;
    bool ok = true;
    double worst_defect = 0.0, worst_quartic = 0.0;
    for (int k = 0; k < 10; ++k) {
        InitParams p;
        p.kind = InitKind::random_spectrum;
        p.alpha_u = 2.0 + 0.15 * k;
        p.amplitude_u = 0.8;
        p.seed = 40000 + static_cast<std::uint64_t>(k);
        auto u0 = make_initial_data(grid, p).u;
        const auto hs = heat_spectrum(u0, nu);
        const double h0 = heat_sobolev_sq(hs, 0.5, 0.0);
        for (double t : {0.01, 0.1, 0.5, 2.0}) {
            const double lhs = heat_sobolev_sq(hs, 0.5, t) + 2.0 * nu * heat_sobolev_sq_integral(hs, 1.5, t);
            const double defect = std::abs(lhs - h0) / h0;
            worst_defect = std::max(worst_defect, defect);
            ok = ok && defect <= 1e-9;
        }
        const double quartic = heat_h1_quartic_integral_inf(hs);
        const double cap = (2.0 / nu) * h0 * h0;
        worst_quartic = std::max(worst_quartic, quartic / cap);
        ok = ok && quartic <= cap;
    }
    record(5, "heat-piece identity and quartic bound (10 fields, 3D N=32)", ok,
           "identity defect " + fmt(worst_defect) + ", quartic ratio " + fmt(worst_quartic),
           timer.seconds());
}

// --- criteria 6, 9, 11: calibrated 3D machinery -------------------------------

struct SplitRunArtifacts {
    RunResult res;
    ExistenceBudget budget;
    MHDState initial;
    SolverConfig cfg;

    SplitRunArtifacts(RunResult r, ExistenceBudget b, MHDState init, SolverConfig c)
        : res(std::move(r)), budget(b), initial(std::move(init)), cfg(c) {}
};

SplitRunArtifacts calderon_run_3d(const ConstantsTable& table) {
    auto grid = make_grid(3, 32, 2.0 * kPi);
    InitParams p;
    p.kind = InitKind::random_spectrum;
    p.alpha_u = 2.5;
    p.alpha_B = 3.0;
    p.amplitude_u = 0.5;
    p.amplitude_B = 0.5;
    p.seed = 31337;
    auto data = make_initial_data(grid, p);
    SolverConfig cfg;
    cfg.nu = 0.05;
    cfg.dt = 2e-3;
    cfg.t_end = 0.2;
    MHDState initial = prepare_initial_state(MHDState{data.u, data.B}, cfg);
    auto res = run(initial, cfg, /*with_splitting=*/true);
    auto part = DyadicPartition::build(grid);
    const auto norms = initial_norms(initial, part);
    const auto t1 = find_t1(initial.u, cfg.nu, table.dim3.c3, table.dim3.c4, cfg.radius);
    const auto budget = budget_3d(norms, cfg.nu, table.dim3, t1.t1);
    return SplitRunArtifacts{std::move(res), budget, std::move(initial), cfg};
}

void criterion_calderon(const SplitRunArtifacts& art, const ConstantsTable& table) {
    Timer timer;
    auto checks = check_split_bounds(art.res.series, *art.res.split, table.dim3, art.budget);
    bool ok = true;
    std::string detail;
    for (const auto& rep : checks.reports) {
        ok = ok && rep.passed;
        if (rep.name == "split_closure") detail = "closure ratio " + fmt(rep.max_ratio);
    }
    record(6, "Calderon splitting closure and piece bounds (3D N=32)", ok, detail, timer.seconds());
}

// --- criterion 7: held-out estimate suite -------------------------------------

void criterion_estimates(const ConstantsTable& table, double calibrate_seconds) {
    Timer timer;
    bool ok = true;
    std::vector<std::string> failures;
    double worst = 0.0;

    auto note = [&](const std::string& name, bool passed, double ratio) {
        worst = std::max(worst, ratio);
        if (!passed) {
            ok = false;
            failures.push_back(name);
        }
    };

    // four held-out runs: estimate checks along trajectories
    auto run_checks = [&](int dim, const InitParams& p, double nu, const std::string& tag) {
        auto grid = make_grid(dim, dim == 2 ? 32 : 16, 2.0 * kPi);
        auto data = make_initial_data(grid, p);
        SolverConfig cfg;
        cfg.nu = nu;
        cfg.dt = 2e-3;
        cfg.t_end = dim == 2 ? 0.25 : 0.2;
        auto res = run(MHDState{data.u, data.B}, cfg);
        const auto& c = table.for_dim(dim);
        auto rb = check_b_growth(res.series, c.c1);
        auto ru = check_u_estimate(res.series, c.c2);
        note(tag + "/b_growth", rb.passed, rb.max_ratio);
        note(tag + "/u_estimate", ru.passed, ru.max_ratio);
    };

    InitParams ot;
    ot.kind = InitKind::orszag_tang;
    ot.amplitude_u = 0.8;
    ot.amplitude_B = 0.9;
    run_checks(2, ot, 0.08, "run2d_ot");

    InitParams r2;
    r2.kind = InitKind::random_spectrum;
    r2.alpha_u = 2.2;
    r2.alpha_B = 2.9;
    r2.amplitude_u = 0.5;
    r2.amplitude_B = 0.5;
    r2.seed = 700001;
    run_checks(2, r2, 0.06, "run2d_rnd");

    InitParams r3 = r2;
    r3.alpha_u = 2.4;
    r3.alpha_B = 3.1;
    r3.amplitude_u = 0.4;
    r3.amplitude_B = 0.45;
    r3.seed = 700002;
    run_checks(3, r3, 0.06, "run3d_a");
    r3.seed = 700003;
    r3.alpha_u = 2.0;
    run_checks(3, r3, 0.05, "run3d_b");

    // six held-out fields: pointwise ratio checks
    for (int dim : {2, 3}) {
        auto grid = make_grid(dim, dim == 2 ? 32 : 16, 2.0 * kPi);
        auto part = DyadicPartition::build(grid);
        const auto& c = table.for_dim(dim);
        for (int k = 0; k < 3; ++k) {
            InitParams p;
            p.kind = InitKind::random_spectrum;
            p.alpha_u = 1.8 + 0.5 * k;
            p.alpha_B = 3.2 - 0.4 * k;
            p.amplitude_u = 1.0;
            p.amplitude_B = 0.7;
            p.seed = 810000 + static_cast<std::uint64_t>(100 * dim + k);
            auto data = make_initial_data(grid, p);
            const std::string tag = (dim == 2 ? "field2d_" : "field3d_") + std::to_string(k);

            auto pr = product_estimate_ratios(part, derivative(data.B.comp(0), dim - 1), data.u.comp(0));
            note(tag + "/algebra", pr.algebra_ratio <= c.algebra, pr.algebra_ratio / c.algebra);
            const double emb = embedding_ratio(data.u, part, EmbeddingTarget::lebesgue_inf);
            note(tag + "/embedding", emb <= c.embedding_linf, emb / c.embedding_linf);
            const double com = commutator_ratio(data.u, data.B.comp(0), part);
            note(tag + "/commutator", com <= c.commutator, com / c.commutator);
            const double che = chemin_ratio(data.u, data.B);
            note(tag + "/chemin", che <= c.chemin, che / std::max(c.chemin, 1e-300));
        }
    }

    std::string detail = "worst held-out ratio " + fmt(worst);
    if (!failures.empty()) detail += "; failed: " + failures.front();
    record(7, "estimate suite on 10 held-out runs/fields", ok,
           detail + " (calibration " + fmt(calibrate_seconds) + "s)", timer.seconds());
}

// --- criterion 8: budget arithmetic -------------------------------------------

void criterion_budgets() {
    Timer timer;
    DimConstants unit;
    unit.c1 = unit.c2 = unit.c3 = unit.c4 = 1.0;
    InitialNorms d;
    d.besov_u_low = 1.0;
    d.l2_u = 1.0;
    d.l2_B = 1.0;
    d.besov_B = 1.0;
    d.hhalf_u = 1.0;

    auto b2 = budget_2d(d, 1.0, unit);
    auto b3 = budget_3d(d, 1.0, unit, kInf);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(b), 1.0); };
    const bool ok = close(b2.m1, 5.0) && close(b2.m2, 4.0) && close(b2.m3, 1.0) &&
                    close(b2.tstar, 5.0 * std::exp(-30.0)) && close(b3.cstar, 0.5) &&
                    close(b3.m1, 10.0) && close(b3.m4, 40180.0);
    record(8, "budget arithmetic vs hand-computed values", ok,
           "T*_2d = " + fmt(b2.tstar) + ", M4_3d = " + fmt(b3.m4), timer.seconds());
}

// --- criterion 9: bootstrap monitors -------------------------------------------

void criterion_bootstrap(const RunResult& run2d, const SplitRunArtifacts& art3d,
                         const ConstantsTable& table) {
    Timer timer;
    bool ok = true;
    std::string detail;

    {
        auto grid = make_grid(2, 64, 2.0 * kPi);
        auto part = DyadicPartition::build(grid);
        InitParams p;
        p.kind = InitKind::orszag_tang;
        auto data = make_initial_data(grid, p);
        SolverConfig cfg;
        cfg.nu = 0.01;
        auto initial = prepare_initial_state(MHDState{data.u, data.B}, cfg);
        const auto norms = initial_norms(initial, part);
        const auto budget = budget_2d(norms, cfg.nu, table.dim2);
        std::size_t checked = 0;
        for (const auto& rep : bootstrap_monitor(run2d.series, budget, table.dim2)) {
            ok = ok && rep.passed;
            checked = std::max(checked, rep.samples);
        }
        detail = "2D T* = " + fmt(budget.tstar) + " (" + std::to_string(checked) + " samples)";
    }
    {
        std::size_t checked = 0;
        for (const auto& rep : bootstrap_monitor(art3d.res.series, art3d.budget, table.dim3)) {
            ok = ok && rep.passed;
            checked = std::max(checked, rep.samples);
        }
        detail += ", 3D T* = " + fmt(art3d.budget.tstar) + " (" + std::to_string(checked) + " samples)";
    }
    record(9, "bootstrap monitors on the 2D and 3D benchmark runs", ok, detail, timer.seconds());
}

// --- criterion 10: truncation rate ---------------------------------------------

void criterion_truncation() {
    Timer timer;
    auto grid = make_grid(2, 128, 2.0 * kPi);
    bool ok = true;
    std::string detail;
    const double radii[] = {4.0, 8.0, 16.0, 32.0};
    int idx = 0;
    for (auto [s, k] : {std::pair{0.5, 1.0}, std::pair{0.0, 2.0}}) {
        const double alpha = s + k + 1.0 + 0.5;  // dim/2 = 1
        auto f = random_zero_mean_scalar(grid, alpha, 52000 + idx++);
        auto rep = truncation_convergence(f, s, k, radii);
        ok = ok && rep.slope >= k - 0.25;
        if (!detail.empty()) detail += ", ";
        detail += "slope(k=" + fmt(k) + ") = " + fmt(rep.slope);
    }
    record(10, "truncation convergence rate over R = {4, 8, 16, 32}", ok, detail, timer.seconds());
}

// --- criterion 11: difference / Gronwall -----------------------------------------

void criterion_difference(const SplitRunArtifacts& art, const ConstantsTable& table) {
    Timer timer;
    SolverConfig cfg = art.cfg;
    cfg.t_end = 0.1;
    auto rep = difference_experiment(art.initial, cfg, 1e-6, 990001, table.dim3, art.budget.tstar);
    auto control = difference_experiment(art.initial, cfg, 0.0, 990001, table.dim3, art.budget.tstar);
    double control_max = 0.0;
    for (double v : control.d) control_max = std::max(control_max, v);
    const bool ok = rep.passed && control_max <= 1e-20;
    record(11, "difference/Gronwall experiment (3D N=32, delta = 1e-6)", ok,
           "max D/envelope " + fmt(rep.max_ratio) + ", control max D " + fmt(control_max),
           timer.seconds());
}

// --- criterion 12: determinism ---------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism() {
    Timer timer;
    const fs::path base = fs::temp_directory_path() / "bmhd_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string cfg_text =
        "[grid]\ndim = 2\nn = 32\n"
        "[solver]\nnu = 0.02\ndt = 0.002\nt_end = 0.05\nseed = 321\n"
        "[init]\nkind = random_spectrum\namplitude_u = 0.4\namplitude_B = 0.4\n"
        "alpha_u = 2.5\nalpha_B = 3.0\n";
    const auto cfg_path = base / "run.cfg";
    atomic_write_text(cfg_path.string(), cfg_text);
    cmd::Overrides o1{(base / "a").string(), std::nullopt, std::nullopt};
    cmd::Overrides o2{(base / "b").string(), std::nullopt, std::nullopt};
    bool ok = cmd::simulate(cfg_path.string(), o1) == cmd::kOk &&
              cmd::simulate(cfg_path.string(), o2) == cmd::kOk;
    for (const char* name : {"series.csv", "state_initial.bmhd", "state_final.bmhd"}) {
        ok = ok && slurp(base / "a" / name) == slurp(base / "b" / name);
    }
    record(12, "bit-identical replay of checkpoints and series", ok, "", timer.seconds());
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");

    criterion_partition();
    criterion_bony();

    Timer t3;
    RunResult run2d = energy_run_2d();
    const double run2d_secs = t3.seconds();
    criterion_energy(run2d);
    g_results.back().seconds += 0.0;
    g_results[g_results.size() - 2].seconds += run2d_secs;

    criterion_heat();

    Timer tcal;
    CalibrationSpec spec;  // 50 fields + 12 snapshots per dimension
    const ConstantsTable table = calibrate(spec);
    const double cal_secs = tcal.seconds();

    Timer t6;
    auto art3d = calderon_run_3d(table);
    const double run3d_secs = t6.seconds();
    criterion_calderon(art3d, table);
    g_results.back().seconds += run3d_secs;
    criterion_estimates(table, cal_secs);
    criterion_budgets();
    criterion_bootstrap(run2d, art3d, table);
    criterion_truncation();
    criterion_difference(art3d, table);
    criterion_determinism();

    std::sort(g_results.begin(), g_results.end(),
              [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    bool all_ok = true;
    for (const auto& c : g_results) {
        all_ok = all_ok && c.passed;
        std::printf("[%s] criterion %2d: %s%s%s (%.1fs)\n", c.passed ? "PASS" : "FAIL", c.id,
                    c.label.c_str(), c.detail.empty() ? "" : " -- ", c.detail.c_str(), c.seconds);
    }
    std::printf(all_ok ? "all criteria passed\n" : "FAILURES present\n");
    return all_ok ? 0 : 1;
}
