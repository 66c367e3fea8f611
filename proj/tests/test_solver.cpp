#include "bmhd/solver.hpp"

#include <cmath>
#include <numbers>

#include "bmhd/initial_data.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bmhd;
constexpr double kPi = std::numbers::pi;

namespace {

MHDState make_ot_state(int n, double amp = 1.0) {
    auto grid = make_grid(2, n, 2.0 * kPi);
    InitParams p;
    p.kind = InitKind::orszag_tang;
    p.amplitude_u = amp;
    p.amplitude_B = amp;
    auto data = make_initial_data(grid, p);
    return MHDState{std::move(data.u), std::move(data.B)};
}

double state_distance(const MHDState& a, const MHDState& b) {
    return l2_norm(a.u - b.u) + l2_norm(a.B - b.B);
}

}  // namespace

TEST_CASE("initial data families") {
    SUBCASE("Orszag-Tang is divergence-free and zero-mean") {
        auto st = make_ot_state(32);
        CHECK(st.u.divergence_error() < 1e-12);
        CHECK(st.B.divergence_error() < 1e-12);
        for (int d = 0; d < 2; ++d) {
            CHECK(std::abs(st.u.comp(d).mean()) < 1e-14);
            CHECK(std::abs(st.B.comp(d).mean()) < 1e-14);
        }
        // (-sin y, sin x): max magnitude at the grid is 1
        CHECK(max_abs(st.u) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    }
    SUBCASE("abc_like is 3D and divergence-free") {
        auto grid = make_grid(3, 16, 2.0 * kPi);
        InitParams p;
        p.kind = InitKind::abc_like;
        auto data = make_initial_data(grid, p);
        CHECK(data.u.divergence_error() < 1e-12);
        CHECK(data.B.divergence_error() < 1e-12);
        CHECK_THROWS_AS((void)make_initial_data(make_grid(2, 16, 2.0 * kPi), p), std::invalid_argument);
    }
    SUBCASE("random spectrum is deterministic and scales with amplitude") {
        auto grid = make_grid(3, 16, 2.0 * kPi);
        auto part = DyadicPartition::build(grid);
        InitParams p;
        p.kind = InitKind::random_spectrum;
        p.seed = 42;
        auto a = make_initial_data(grid, p);
        auto b = make_initial_data(grid, p);
        for (int d = 0; d < 3; ++d)
            for (std::size_t i = 0; i < a.u.comp(d).size(); ++i) {
                CHECK(a.u.comp(d)[i] == b.u.comp(d)[i]);
                CHECK(a.B.comp(d)[i] == b.B.comp(d)[i]);
            }
        const double nb = part.besov_norm(a.B, {1.5, 2.0, 1.0, true});
        CHECK(nb > 0.0);
        CHECK(std::isfinite(nb));
        InitParams p2 = p;
        p2.amplitude_B = 3.0;
        auto c = make_initial_data(grid, p2);
        CHECK(part.besov_norm(c.B, {1.5, 2.0, 1.0, true}) == doctest::Approx(3.0 * nb).epsilon(1e-12));
    }
}

TEST_CASE("right-hand side structure") {
    SolverConfig cfg;
    cfg.nu = 0.3;

    SUBCASE("single divergence-free mode reduces to pure diffusion") {
        auto grid = make_grid(2, 16, 2.0 * kPi);
        MHDState st{VectorField(grid), VectorField(grid)};
        auto mode = oracles::single_mode(grid, {1, 0, 0}, 0.5);
        st.u.comp(1) = mode;  // u = (0, cos x): div-free, (u.grad)u = 0
        auto [dudt, dbdt] = rhs(st, cfg);
        const auto diff = laplacian(st.u);
        double err = 0.0;
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < dudt.comp(d).size(); ++i)
                err = std::max(err, std::abs(dudt.comp(d)[i] - cfg.nu * diff.comp(d)[i]));
        CHECK(err < 1e-12 * l2_norm(st.u));
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < dbdt.comp(d).size(); ++i)
                CHECK(std::abs(dbdt.comp(d)[i]) == 0.0);
    }
    SUBCASE("u = 0 leaves only the magnetic push") {
        auto grid = make_grid(2, 16, 2.0 * kPi);
        MHDState st{VectorField(grid), leray_project(oracles::random_vector(grid, 1.5, 7))};
        auto [dudt, dbdt] = rhs(st, cfg);
        const auto nl = nonlinear_terms(st.u, st.B, cfg);
        double err = 0.0, den = 0.0;
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < dudt.comp(d).size(); ++i) {
                err = std::max(err, std::abs(dudt.comp(d)[i] - nl.adv_bb.comp(d)[i]));
                den = std::max(den, std::abs(nl.adv_bb.comp(d)[i]));
                CHECK(std::abs(dbdt.comp(d)[i]) < 1e-14);
            }
        CHECK(err <= 1e-12 * std::max(den, 1.0));
    }
    SUBCASE("energy pairing collapses to the viscous dissipation") {
        auto grid = make_grid(2, 16, 2.0 * kPi);
        MHDState st{leray_project(oracles::random_vector(grid, 1.5, 8)),
                    leray_project(oracles::random_vector(grid, 1.8, 9))};
        st.u.symmetrize();
        st.B.symmetrize();
        auto [dudt, dbdt] = rhs(st, cfg);
        const double pairing = inner_product(dudt, st.u) + inner_product(dbdt, st.B);
        const double dissip = -cfg.nu * std::pow(sobolev_norm(st.u, 1.0, true), 2);
        CHECK(pairing == doctest::Approx(dissip).epsilon(1e-11));
    }
    SUBCASE("truncated rhs stays inside the ball and divergence-free") {
        auto grid = make_grid(2, 16, 2.0 * kPi);
        SolverConfig tc = cfg;
        tc.radius = 4.0;
        MHDState st{leray_project(oracles::random_vector(grid, 1.0, 10)),
                    leray_project(oracles::random_vector(grid, 1.0, 11))};
        auto [dudt, dbdt] = rhs(st, tc);
        CHECK(dudt.divergence_error() < 1e-11);
        CHECK(dbdt.divergence_error() < 1e-11);
        // the nonlinear part outside B_R must vanish identically
        const auto nl = nonlinear_terms(st.u, st.B, tc);
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < grid->size(); ++i)
                if (grid->xi_sq(i) > 16.0) {
                    CHECK(nl.adv_bb.comp(d)[i] == Complex{0.0, 0.0});
                    CHECK(nl.db_dt.comp(d)[i] == Complex{0.0, 0.0});
                }
    }
}

TEST_CASE("stepping") {
    SUBCASE("pure heat decay is exact with the nonlinearity disabled") {
        auto grid = make_grid(2, 16, 2.0 * kPi);
        SolverConfig cfg;
        cfg.nu = 0.4;
        cfg.dt = 1e-2;
        cfg.t_end = 0.2;
        cfg.disable_nonlinear = true;
        auto u0 = leray_project(oracles::random_vector(grid, 1.0, 12));
        u0.symmetrize();
        MHDState st{u0, VectorField(grid)};
        auto result = run(st, cfg);
        double err = 0.0, den = 0.0;
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < u0.comp(d).size(); ++i) {
                const Complex expect = u0.comp(d)[i] * std::exp(-cfg.nu * grid->xi_sq(i) * cfg.t_end);
                err = std::max(err, std::abs(result.state.u.comp(d)[i] - expect));
                den = std::max(den, std::abs(expect));
            }
        CHECK(err / den < 1e-10);
    }
    SUBCASE("frozen velocity leaves B untouched when u = 0") {
        auto grid = make_grid(2, 16, 2.0 * kPi);
        SolverConfig cfg;
        cfg.nu = 0.1;
        cfg.dt = 1e-2;
        cfg.t_end = 0.1;
        cfg.freeze_u = true;
        auto B0 = leray_project(oracles::random_vector(grid, 1.5, 13));
        B0.symmetrize();
        MHDState st{VectorField(grid), B0};
        const MHDState prepared = prepare_initial_state(st, cfg);
        auto result = run(st, cfg);
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < B0.comp(d).size(); ++i)
                CHECK(result.state.B.comp(d)[i] == prepared.B.comp(d)[i]);
    }
    SUBCASE("fourth-order self convergence") {
        auto st = make_ot_state(16, 0.5);
        SolverConfig coarse;
        coarse.nu = 0.05;
        coarse.t_end = 0.1;
        coarse.dt = 1.0 / 100.0;
        SolverConfig half = coarse;
        half.dt = coarse.dt / 2.0;
        SolverConfig fine = coarse;
        fine.dt = coarse.dt / 8.0;
        auto r1 = run(st, coarse);
        auto r2 = run(st, half);
        auto rf = run(st, fine);
        const double e1 = state_distance(r1.state, rf.state);
        const double e2 = state_distance(r2.state, rf.state);
        CHECK(e1 / e2 > 11.0);  // ~16 for a 4th-order scheme, slack for the fine reference
        CHECK(e1 / e2 < 21.0);
    }
    SUBCASE("CFL guard rejects an oversized step") {
        auto st = make_ot_state(32);
        SolverConfig cfg;
        cfg.nu = 0.01;
        cfg.dt = 0.5;  // dx / |u| ~ 0.14
        cfg.t_end = 1.0;
        CHECK_THROWS_AS((void)run(st, cfg), InvariantViolation);
    }
    SUBCASE("divergence and truncation support are preserved along a run") {
        auto st = make_ot_state(32, 0.8);
        SolverConfig cfg;
        cfg.nu = 0.02;
        cfg.dt = 2e-3;
        cfg.t_end = 0.1;
        cfg.radius = 8.0;
        auto result = run(st, cfg);
        CHECK(result.state.u.divergence_error() < 1e-11);
        CHECK(result.state.B.divergence_error() < 1e-11);
        const auto& g = result.state.u.grid();
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < g.size(); ++i)
                if (g.xi_sq(i) > 64.0) {
                    CHECK(result.state.u.comp(d)[i] == Complex{0.0, 0.0});
                    CHECK(result.state.B.comp(d)[i] == Complex{0.0, 0.0});
                }
        CHECK(result.state.u.comp(0).hermitian_error() < 1e-12);
    }
}

TEST_CASE("norm series recording") {
    auto st = make_ot_state(32, 0.6);
    SolverConfig cfg;
    cfg.nu = 0.02;
    cfg.dt = 2e-3;
    cfg.t_end = 0.08;
    cfg.sample_every = 5;
    auto result = run(st, cfg);
    const auto& s = result.series;

    CHECK(s.size() == 9);  // 8 strided samples + final
    for (std::size_t k = 1; k < s.size(); ++k) {
        CHECK(s.t[k] > s.t[k - 1]);
        CHECK(s.yr[k] >= s.yr[k - 1]);
        CHECK(s.zr[k] >= s.zr[k - 1]);
        CHECK(s.int_u_hn2_sq[k] >= s.int_u_hn2_sq[k - 1]);
    }
    CHECK(s.xr.back() == s.besov_u_low.back());
    // 2D: H^1 norm splits exactly into L2 + gradient
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double lhs = s.hn2_u[k] * s.hn2_u[k];
        const double rhs = s.l2_u[k] * s.l2_u[k] + s.l2_grad_u[k] * s.l2_grad_u[k];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }

    SUBCASE("energy identity holds on the short run") {
        double dissip = 0.0;
        const double e0 = s.l2_u.front() * s.l2_u.front() + s.l2_B.front() * s.l2_B.front();
        for (std::size_t k = 1; k < s.size(); ++k) {
            dissip += 0.5 * (s.t[k] - s.t[k - 1]) *
                      (s.l2_grad_u[k - 1] * s.l2_grad_u[k - 1] + s.l2_grad_u[k] * s.l2_grad_u[k]);
            const double e = s.l2_u[k] * s.l2_u[k] + s.l2_B[k] * s.l2_B[k];
            CHECK(std::abs(e - e0 + 2.0 * cfg.nu * dissip) < 2e-5 * e0);
        }
    }
}

TEST_CASE("deterministic replay") {
    auto grid = make_grid(2, 16, 2.0 * kPi);
    InitParams p;
    p.kind = InitKind::random_spectrum;
    p.seed = 99;
    p.amplitude_u = 0.5;
    p.amplitude_B = 0.5;
    auto data = make_initial_data(grid, p);
    MHDState st{data.u, data.B};
    SolverConfig cfg;
    cfg.nu = 0.05;
    cfg.dt = 5e-3;
    cfg.t_end = 0.05;
    auto r1 = run(st, cfg);
    auto r2 = run(st, cfg);
    for (std::size_t c = 0; c < NormSeries::column_names().size(); ++c) {
        const auto& col1 = r1.series.column(c);
        const auto& col2 = r2.series.column(c);
        REQUIRE(col1.size() == col2.size());
        for (std::size_t k = 0; k < col1.size(); ++k) CHECK(col1[k] == col2[k]);
    }
    for (int d = 0; d < 2; ++d)
        for (std::size_t i = 0; i < r1.state.u.comp(d).size(); ++i)
            CHECK(r1.state.u.comp(d)[i] == r2.state.u.comp(d)[i]);
}

TEST_CASE("two-thirds dealiasing mode") {
    auto st = make_ot_state(32, 0.6);
    SolverConfig cfg;
    cfg.nu = 0.02;
    cfg.dt = 2e-3;
    cfg.t_end = 0.05;
    cfg.dealias = Dealias::two_thirds;
    auto result = run(st, cfg);
    const auto& s = result.series;
    const double e0 = s.l2_u.front() * s.l2_u.front() + s.l2_B.front() * s.l2_B.front();
    double dissip = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k)
        dissip += 0.5 * (s.t[k] - s.t[k - 1]) *
                  (s.l2_grad_u[k - 1] * s.l2_grad_u[k - 1] + s.l2_grad_u[k] * s.l2_grad_u[k]);
    const double e = s.l2_u.back() * s.l2_u.back() + s.l2_B.back() * s.l2_B.back();
    CHECK(std::abs(e - e0 + 2.0 * cfg.nu * dissip) < 1e-4 * e0);
}
