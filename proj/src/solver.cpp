#include "bmhd/solver.hpp"

#include <cmath>
#include <limits>

namespace bmhd {

namespace {

// exp(nu Lap tau) applied in place
void heat_factor(VectorField& v, double nu, double tau) {
    const auto& g = v.grid();
    for (int d = 0; d < v.dim(); ++d) {
        auto& c = v.comp(d).coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-nu * g.xi_sq(i) * tau);
    }
}

VectorField project_truncate(VectorField f, double radius) {
    f = leray_project(std::move(f));
    if (std::isfinite(radius)) f = fourier_truncate(f, radius);
    return f;
}

// All quadratic terms in one pass: shared fine-grid physical fields, one
// forward transform per distinct product u_j u_i, B_j B_i, u_j B_i.
NonlinearTerms nonlinear_terms_padded(const VectorField& u, const VectorField& B, const SolverConfig& cfg) {
    const auto grid = u.grid_ptr();
    const int dim = u.dim();
    const int m = detail::padded_size(grid->n());

    std::vector<std::vector<double>> pu(static_cast<std::size_t>(dim)), pb(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
        pu[static_cast<std::size_t>(d)] = detail::to_fine_physical(u.comp(d), m);
        pb[static_cast<std::size_t>(d)] = detail::to_fine_physical(B.comp(d), m);
    }
    const std::size_t npts = pu[0].size();
    std::vector<double> prod(npts);

    auto hat_of = [&](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t x = 0; x < npts; ++x) prod[x] = a[x] * b[x];
        return detail::from_fine_physical(grid, prod, m);
    };

    // symmetric blocks for (u.grad)u and (B.grad)B, full block for u (x) B
    std::vector<ScalarField> uu, bb, ub;
    uu.reserve(static_cast<std::size_t>(dim * dim));
    bb.reserve(static_cast<std::size_t>(dim * dim));
    ub.reserve(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            uu.push_back(hat_of(pu[static_cast<std::size_t>(i)], pu[static_cast<std::size_t>(j)]));
            bb.push_back(hat_of(pb[static_cast<std::size_t>(i)], pb[static_cast<std::size_t>(j)]));
        }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            ub.push_back(hat_of(pu[static_cast<std::size_t>(i)], pb[static_cast<std::size_t>(j)]));

    auto sym_at = [&](const std::vector<ScalarField>& blocks, int i, int j) -> const ScalarField& {
        const int a = std::max(i, j), b = std::min(i, j);
        return blocks[static_cast<std::size_t>(a * (a + 1) / 2 + b)];
    };
    auto ub_at = [&](int i, int j) -> const ScalarField& {  // transform of u_i B_j
        return ub[static_cast<std::size_t>(i * dim + j)];
    };

    NonlinearTerms out{VectorField(grid), VectorField(grid), VectorField(grid)};
    VectorField dudt_b(grid);
    for (int i = 0; i < dim; ++i) {
        ScalarField acc_uu(grid), acc_bb(grid), acc_bu(grid), acc_ub(grid);
        for (int j = 0; j < dim; ++j) {
            acc_uu += derivative(sym_at(uu, i, j), j);  // d_j (u_j u_i)
            acc_bb += derivative(sym_at(bb, i, j), j);  // d_j (B_j B_i)
            acc_ub += derivative(ub_at(i, j), j);       // d_j (u_i B_j)?  see below
            acc_bu += derivative(ub_at(j, i), j);       // d_j (u_j B_i)
        }
        out.adv_uu.comp(i) = acc_uu;
        out.adv_bb.comp(i) = acc_bb;
        // (B.grad)u_i = d_j (B_j u_i) uses the transform of u_i B_j;
        // (u.grad)B_i = d_j (u_j B_i) uses the transpose entry.
        out.db_dt.comp(i) = acc_ub - acc_bu;
    }

    out.adv_uu = project_truncate(std::move(out.adv_uu), cfg.radius);
    out.adv_bb = project_truncate(std::move(out.adv_bb), cfg.radius);
    out.db_dt = project_truncate(std::move(out.db_dt), cfg.radius);
    return out;
}

NonlinearTerms nonlinear_terms_two_thirds(const VectorField& u, const VectorField& B, const SolverConfig& cfg) {
    NonlinearTerms out{advect_div_form_two_thirds(B, B), advect_div_form_two_thirds(u, u),
                       VectorField(u.grid_ptr())};
    out.db_dt = advect_div_form_two_thirds(B, u) - advect_div_form_two_thirds(u, B);
    out.adv_uu = project_truncate(std::move(out.adv_uu), cfg.radius);
    out.adv_bb = project_truncate(std::move(out.adv_bb), cfg.radius);
    out.db_dt = project_truncate(std::move(out.db_dt), cfg.radius);
    return out;
}

void check_cfl(const MHDState& state, const SolverConfig& cfg) {
    const double dx = state.u.grid().length() / state.u.grid().n();
    const double speed = std::max({max_abs(state.u), max_abs(state.B), 1e-8});
    if (cfg.dt > cfg.cfl_safety * dx / speed)
        throw InvariantViolation("CFL violation: dt = " + std::to_string(cfg.dt) + " exceeds " +
                                 std::to_string(cfg.cfl_safety * dx / speed) + " at t = " +
                                 std::to_string(state.t));
}

void check_finite(const MHDState& state) {
    if (state.u.has_nan() || state.B.has_nan())
        throw InvariantViolation("non-finite coefficients at t = " + std::to_string(state.t));
}

}  // namespace

NonlinearTerms nonlinear_terms(const VectorField& u, const VectorField& B, const SolverConfig& cfg) {
    if (cfg.disable_nonlinear) {
        return NonlinearTerms{VectorField(u.grid_ptr()), VectorField(u.grid_ptr()), VectorField(u.grid_ptr())};
    }
    if (cfg.dealias == Dealias::two_thirds) return nonlinear_terms_two_thirds(u, B, cfg);
    return nonlinear_terms_padded(u, B, cfg);
}

std::pair<VectorField, VectorField> rhs(const MHDState& state, const SolverConfig& cfg) {
    auto nl = nonlinear_terms(state.u, state.B, cfg);
    VectorField dudt = nl.adv_bb - nl.adv_uu;
    dudt += cfg.nu * laplacian(state.u);
    if (cfg.freeze_u) dudt *= 0.0;
    return {std::move(dudt), std::move(nl.db_dt)};
}

void step(MHDState& state, const SolverConfig& cfg, SplitState* split, const NonlinearTerms* k1_pre) {
    const double dt = cfg.dt;
    const double nu = cfg.nu;

    // Lawson integrating-factor RK4 on (u, B): u carries exp(nu Lap t)
    // factors, B has no diffusion.  Auxiliary tracks reuse the exact stage
    // forcings of the main state so the splitting closes to round-off.
    struct Stage {
        VectorField du;  // nonlinear du/dt at the stage
        VectorField db;
        VectorField g_v;  // forcing of v:  Pi S_R (B.grad)B
        VectorField g_w;  // forcing of w: -Pi S_R (u.grad)u
    };

    auto eval = [&](const VectorField& u, const VectorField& B) {
        auto nl = (k1_pre != nullptr && &u == &state.u) ? *k1_pre : nonlinear_terms(u, B, cfg);
        Stage s{nl.adv_bb - nl.adv_uu, std::move(nl.db_dt), std::move(nl.adv_bb), -1.0 * std::move(nl.adv_uu)};
        if (cfg.freeze_u) s.du *= 0.0;
        return s;
    };

    const VectorField u0 = state.u;
    const VectorField B0 = state.B;

    Stage s1 = eval(state.u, state.B);

    auto half_push = [&](const VectorField& base, const VectorField& slope) {
        VectorField x = base;
        VectorField inc = slope;
        inc *= 0.5 * dt;
        x += inc;
        heat_factor(x, nu, 0.5 * dt);
        return x;
    };

    // stage 2 at t + dt/2
    VectorField u_a = half_push(u0, s1.du);
    VectorField B_a = B0 + (0.5 * dt) * s1.db;
    Stage s2 = eval(u_a, B_a);

    // stage 3 at t + dt/2
    VectorField u_b = u0;
    heat_factor(u_b, nu, 0.5 * dt);
    u_b += (0.5 * dt) * s2.du;
    VectorField B_b = B0 + (0.5 * dt) * s2.db;
    Stage s3 = eval(u_b, B_b);

    // stage 4 at t + dt
    VectorField u_c = u0;
    heat_factor(u_c, nu, dt);
    VectorField k3e = s3.du;
    heat_factor(k3e, nu, 0.5 * dt);
    u_c += dt * k3e;
    VectorField B_c = B0 + dt * s3.db;
    Stage s4 = eval(u_c, B_c);

    // combine a diffusive track: x_{n+1} = E(dt) x_n
    //   + dt/6 [E(dt) g1 + 2 E(dt/2) (g2 + g3) + g4]
    auto combine_diffusive = [&](const VectorField& x0, const VectorField& g1, const VectorField& g2,
                                 const VectorField& g3, const VectorField& g4) {
        VectorField x = x0;
        heat_factor(x, nu, dt);
        VectorField a = g1;
        heat_factor(a, nu, dt);
        VectorField b = g2 + g3;
        heat_factor(b, nu, 0.5 * dt);
        x += (dt / 6.0) * a;
        x += (dt / 3.0) * b;
        x += (dt / 6.0) * g4;
        return x;
    };

    if (!cfg.freeze_u) state.u = combine_diffusive(u0, s1.du, s2.du, s3.du, s4.du);
    state.B = B0 + (dt / 6.0) * (s1.db + 2.0 * (s2.db + s3.db) + s4.db);

    if (split != nullptr) {
        heat_factor(split->h, nu, dt);  // zero forcing: pure integrating factor
        split->v = combine_diffusive(split->v, s1.g_v, s2.g_v, s3.g_v, s4.g_v);
        split->w = combine_diffusive(split->w, s1.g_w, s2.g_w, s3.g_w, s4.g_w);
    }

    state.t += dt;
}

MHDState prepare_initial_state(const MHDState& raw, const SolverConfig& cfg) {
    MHDState s(project_truncate(raw.u, cfg.radius), project_truncate(raw.B, cfg.radius));
    s.t = raw.t;
    if (cfg.dealias == Dealias::two_thirds) {
        apply_two_thirds_mask(s.u);
        apply_two_thirds_mask(s.B);
    }
    s.u.symmetrize();
    s.B.symmetrize();
    return s;
}

namespace {

struct Recorder {
    const SolverConfig& cfg;
    DyadicPartition part;
    NormSeries& series;
    double n_half;

    Recorder(const SolverConfig& cfg_, GridPtr grid, NormSeries& out)
        : cfg(cfg_), part(DyadicPartition::build(grid)), series(out) {
        series.dim = grid->dim();
        series.nu = cfg.nu;
        n_half = 0.5 * grid->dim();
    }

    static double trapz_add(std::vector<double>& col, const std::vector<double>& ts, double value,
                            double prev_value) {
        const std::size_t k = col.size();
        if (k == 0) {
            col.push_back(0.0);
            return 0.0;
        }
        const double dt = ts[k] - ts[k - 1];
        const double inc = 0.5 * dt * (value + prev_value);
        col.push_back(col.back() + inc);
        return col.back();
    }

    void record(const MHDState& st, const NonlinearTerms& nl) {
        auto& s = series;
        if (!s.t.empty() && st.t <= s.t.back())
            throw InvariantViolation("norm series times must be strictly increasing");

        const BesovIndex low{n_half - 1.0, 2.0, 1.0, true};
        const BesovIndex mid{n_half, 2.0, 1.0, true};

        s.t.push_back(st.t);
        s.l2_u.push_back(l2_norm(st.u));
        s.l2_B.push_back(l2_norm(st.B));
        s.l2_grad_u.push_back(sobolev_norm(st.u, 1.0, true));
        s.hhalf_u.push_back(sobolev_norm(st.u, 0.5, true));
        s.hn2_u.push_back(sobolev_norm(st.u, n_half, false));
        s.gradu_hhalf.push_back(sobolev_norm(st.u, 1.5, true));
        s.besov_u_low.push_back(part.besov_norm(st.u, low));
        s.besov_u_mid.push_back(part.besov_norm(st.u, mid));
        s.besov_B.push_back(part.besov_norm(st.B, mid));
        auto grads = gradient(st.u);
        s.besov_grad_u.push_back(part.besov_norm(std::span<const ScalarField>(grads.data(), grads.size()), mid));
        s.besov_lap_u.push_back(part.besov_norm(laplacian(st.u), low));
        s.xr.push_back(s.besov_u_low.back());

        const std::size_t k = s.t.size() - 1;
        auto prev = [&](const std::vector<double>& col) { return k == 0 ? col.back() : col[k - 1]; };
        trapz_add(s.yr, s.t, cfg.nu * s.besov_grad_u.back(), cfg.nu * prev(s.besov_grad_u));
        trapz_add(s.zr, s.t, s.besov_B.back() * s.besov_B.back(), prev(s.besov_B) * prev(s.besov_B));
        trapz_add(s.int_l2u_sq, s.t, s.l2_u.back() * s.l2_u.back(), prev(s.l2_u) * prev(s.l2_u));
        trapz_add(s.int_u_hn2_sq, s.t, s.hn2_u.back() * s.hn2_u.back(), prev(s.hn2_u) * prev(s.hn2_u));
        trapz_add(s.int_gradu_hhalf_sq, s.t, s.gradu_hhalf.back() * s.gradu_hhalf.back(),
                  prev(s.gradu_hhalf) * prev(s.gradu_hhalf));

        VectorField dudt = nl.adv_bb - nl.adv_uu;
        dudt += cfg.nu * laplacian(st.u);
        if (cfg.freeze_u) dudt *= 0.0;
        s.dudt_besov.push_back(part.besov_norm(dudt, low));
        s.dbdt_besov.push_back(part.besov_norm(nl.db_dt, low));
    }

    void record_split(const MHDState& st, const SplitState& sp, SplitSeries& out) {
        out.t.push_back(st.t);
        auto push3 = [&](std::vector<double>& ch, std::vector<double>& cv, std::vector<double>& cw, double s) {
            ch.push_back(sobolev_norm(sp.h, s, true));
            cv.push_back(sobolev_norm(sp.v, s, true));
            cw.push_back(sobolev_norm(sp.w, s, true));
        };
        push3(out.h_hhalf, out.v_hhalf, out.w_hhalf, 0.5);
        push3(out.h_h1, out.v_h1, out.w_h1, 1.0);
        push3(out.h_h32, out.v_h32, out.w_h32, 1.5);

        const std::size_t k = out.t.size() - 1;
        auto prev = [&](const std::vector<double>& col) { return k == 0 ? col.back() : col[k - 1]; };
        auto sq = [](double x) { return x * x; };
        auto p4 = [](double x) { return x * x * x * x; };
        trapz_add(out.int_h_h32_sq, out.t, sq(out.h_h32.back()), sq(prev(out.h_h32)));
        trapz_add(out.int_v_h32_sq, out.t, sq(out.v_h32.back()), sq(prev(out.v_h32)));
        trapz_add(out.int_w_h32_sq, out.t, sq(out.w_h32.back()), sq(prev(out.w_h32)));
        trapz_add(out.int_h_h1_4, out.t, p4(out.h_h1.back()), p4(prev(out.h_h1)));
        trapz_add(out.int_v_h1_4, out.t, p4(out.v_h1.back()), p4(prev(out.v_h1)));
        trapz_add(out.int_w_h1_4, out.t, p4(out.w_h1.back()), p4(prev(out.w_h1)));

        const VectorField sum = sp.h + sp.v + sp.w;
        const double un = l2_norm(st.u);
        out.closure_err.push_back(un > 0.0 ? l2_norm(st.u - sum) / un : l2_norm(sum));
        const VectorField w_diff = st.u - sp.h - sp.v;
        const double wn = std::max(l2_norm(sp.w), 1e-300);
        out.w_mismatch.push_back(l2_norm(sp.w - w_diff) / wn);
    }
};

}  // namespace

RunResult run(const MHDState& state0, const SolverConfig& cfg, bool with_splitting) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (!(cfg.nu > 0.0)) throw std::invalid_argument("solver: nu must be positive");
    if (cfg.sample_every < 1) throw std::invalid_argument("solver: sample_every must be >= 1");
    if (with_splitting && state0.u.grid().dim() != 3)
        throw std::invalid_argument("calderon splitting runs are 3D");

    MHDState state = prepare_initial_state(state0, cfg);
    check_finite(state);
    check_cfl(state, cfg);

    RunResult out{MHDState(state.u, state.B), NormSeries{}, std::nullopt, std::nullopt};
    out.state.t = state.t;
    Recorder rec(cfg, state.u.grid_ptr(), out.series);

    SplitState split{state.u, VectorField(state.u.grid_ptr()), VectorField(state.u.grid_ptr())};
    if (with_splitting) out.split = SplitSeries{};

    const auto n_steps = static_cast<long>(std::llround(cfg.t_end / cfg.dt));
    if (n_steps < 1) throw std::invalid_argument("solver: t_end shorter than one step");

    for (long i = 0; i < n_steps; ++i) {
        const bool sampling = (i % cfg.sample_every) == 0;
        NonlinearTerms nl = nonlinear_terms(state.u, state.B, cfg);
        if (sampling) {
            rec.record(state, nl);
            if (with_splitting) rec.record_split(state, split, *out.split);
        }
        if (i % cfg.cfl_check_every == 0) {
            check_finite(state);
            check_cfl(state, cfg);
        }
        step(state, cfg, with_splitting ? &split : nullptr, &nl);
    }
    check_finite(state);
    NonlinearTerms nl = nonlinear_terms(state.u, state.B, cfg);
    rec.record(state, nl);
    if (with_splitting) {
        rec.record_split(state, split, *out.split);
        out.split_state = std::move(split);
    }

    out.state = std::move(state);
    return out;
}

// --- series column plumbing --------------------------------------------------

const std::vector<std::string>& NormSeries::column_names() {
    static const std::vector<std::string> names = {
        "t", "l2_u", "l2_B", "l2_grad_u", "hhalf_u", "hn2_u", "gradu_hhalf",
        "besov_u_low", "besov_u_mid", "besov_B", "besov_grad_u", "besov_lap_u",
        "xr", "yr", "zr", "int_l2u_sq", "int_u_hn2_sq", "int_gradu_hhalf_sq",
        "dudt_besov", "dbdt_besov"};
    return names;
}

std::vector<double>& NormSeries::column(std::size_t i) {
    std::vector<double>* cols[] = {&t, &l2_u, &l2_B, &l2_grad_u, &hhalf_u, &hn2_u, &gradu_hhalf,
                                   &besov_u_low, &besov_u_mid, &besov_B, &besov_grad_u, &besov_lap_u,
                                   &xr, &yr, &zr, &int_l2u_sq, &int_u_hn2_sq, &int_gradu_hhalf_sq,
                                   &dudt_besov, &dbdt_besov};
    return *cols[i];
}

const std::vector<double>& NormSeries::column(std::size_t i) const {
    return const_cast<NormSeries*>(this)->column(i);
}

const std::vector<std::string>& SplitSeries::column_names() {
    static const std::vector<std::string> names = {
        "t", "h_hhalf", "v_hhalf", "w_hhalf", "h_h1", "v_h1", "w_h1", "h_h32", "v_h32", "w_h32",
        "int_h_h32_sq", "int_v_h32_sq", "int_w_h32_sq", "int_h_h1_4", "int_v_h1_4", "int_w_h1_4",
        "closure_err", "w_mismatch"};
    return names;
}

std::vector<double>& SplitSeries::column(std::size_t i) {
    std::vector<double>* cols[] = {&t, &h_hhalf, &v_hhalf, &w_hhalf, &h_h1, &v_h1, &w_h1,
                                   &h_h32, &v_h32, &w_h32, &int_h_h32_sq, &int_v_h32_sq, &int_w_h32_sq,
                                   &int_h_h1_4, &int_v_h1_4, &int_w_h1_4, &closure_err, &w_mismatch};
    return *cols[i];
}

const std::vector<double>& SplitSeries::column(std::size_t i) const {
    return const_cast<SplitSeries*>(this)->column(i);
}

}  // namespace bmhd
