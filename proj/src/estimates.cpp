#include "bmhd/estimates.hpp"

#include <cmath>

#include "bmhd/initial_data.hpp"
#include "bmhd/littlewood_paley.hpp"
#include "bmhd/paraproduct.hpp"
#include "bmhd/spectral_ops.hpp"

namespace bmhd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1.0 + 1e-9;  // round-off headroom for exact-equality cases

void check_sample(CheckReport& rep, double t, double lhs, double rhs) {
    ++rep.samples;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInf : 0.0);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (lhs > rhs * kSlack) {
        rep.passed = false;
        if (rep.violations.size() < 32) rep.violations.push_back({t, lhs, rhs});
    }
}

double safe_div(double num, double den) { return den == 0.0 ? kInf : num / den; }

}  // namespace

InitialNorms initial_norms(const MHDState& state, const DyadicPartition& part) {
    const double n_half = 0.5 * state.u.grid().dim();
    InitialNorms d;
    d.l2_u = l2_norm(state.u);
    d.l2_B = l2_norm(state.B);
    d.besov_u_low = part.besov_norm(state.u, {n_half - 1.0, 2.0, 1.0, true});
    d.besov_B = part.besov_norm(state.B, {n_half, 2.0, 1.0, true});
    d.hhalf_u = sobolev_norm(state.u, 0.5, true);
    return d;
}

ExistenceBudget budget_2d(const InitialNorms& d, double nu, const DimConstants& c) {
    ExistenceBudget b;
    b.dim = 2;
    const double energy = d.l2_u * d.l2_u + d.l2_B * d.l2_B;
    b.m1 = d.besov_u_low + (2.0 * c.c2 / nu) * energy;
    b.m2 = 2.0 * c.c2 * energy;
    b.m3 = c.c1 * d.besov_B * d.besov_B;
    const double branch1 = safe_div(b.m1, b.m2);
    const double branch2 = safe_div(b.m1, b.m3) * std::exp(-6.0 * c.c1 * b.m1 / nu);
    b.tstar = std::min(branch1, branch2);
    return b;
}

ExistenceBudget budget_3d(const InitialNorms& d, double nu, const DimConstants& c, double t1) {
    ExistenceBudget b;
    b.dim = 3;
    b.t1 = t1;
    b.cstar = nu / (2.0 * std::pow(c.c3 * c.c4, 0.25));
    const double x = d.besov_u_low;  // ||u0||_{B-dot^{1/2}_{2,1}}
    const double energy = d.l2_u * d.l2_u + d.l2_B * d.l2_B;
    b.m1 = x + (c.c2 / nu) * x * x + (8.0 * c.c2 * c.c3 / std::pow(nu, 3)) * std::pow(x, 4);
    b.m2 = 2.0 * c.c2 * energy;
    b.m3 = d.besov_B * d.besov_B;
    b.m4 = (2.0 + c.c2) * b.m1 + (1.5 * c.c2 / nu) * b.m1 * b.m1 +
           (4.0 * c.c2 * c.c3 / std::pow(nu, 3)) * std::pow(b.m1, 4);
    const double exponent = -(2.0 * c.c1 / nu) * x - (2.0 * c.c1 * c.c2 / (nu * nu)) * x * x -
                            (8.0 * c.c1 * c.c2 * c.c3 / std::pow(nu, 4)) * std::pow(x, 4) -
                            (3.0 * c.c1 * c.c2 / (nu * nu)) * b.cstar -
                            (2.0 * c.c1 * c.c2 / nu) * b.cstar * b.cstar -
                            (4.0 * c.c1 * c.c2 * c.c3 / std::pow(nu, 4)) * std::pow(b.cstar, 4);
    b.t2 = safe_div(b.cstar, b.m3) * std::exp(exponent);
    const double branch3 = safe_div(b.m1, b.m2);
    const double branch4 = safe_div(b.m1, b.m3) * std::exp(-2.0 * c.c1 * b.m4 / nu);
    b.tstar = std::min(std::min(b.t1, b.t2), std::min(branch3, branch4));
    return b;
}

CheckReport check_b_growth(const NormSeries& s, double c1) {
    CheckReport rep{"b_growth_gronwall"};
    const double b0 = s.besov_B.empty() ? 0.0 : s.besov_B.front();
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (b0 == 0.0) {
            // B0 = 0 must propagate: B stays zero
            check_sample(rep, s.t[k], s.besov_B[k], 0.0);
            continue;
        }
        const double lhs = std::log(std::max(s.besov_B[k], 1e-300) / b0);
        const double rhs = c1 * s.yr[k] / s.nu;
        ++rep.samples;
        rep.max_ratio = std::max(rep.max_ratio, rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInf : 0.0));
        if (lhs > rhs + 1e-9) {
            rep.passed = false;
            if (rep.violations.size() < 32) rep.violations.push_back({s.t[k], lhs, rhs});
        }
    }
    return rep;
}

CheckReport check_u_estimate(const NormSeries& s, double c2) {
    CheckReport rep{"u_estimate"};
    const double x0 = s.xr.empty() ? 0.0 : s.xr.front();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double lhs = s.xr[k] + s.yr[k];
        const double rhs = x0 + c2 * (s.int_u_hn2_sq[k] + s.zr[k]);
        check_sample(rep, s.t[k], lhs, rhs);
    }
    return rep;
}

CheckReport check_energy_identity(const NormSeries& s, double rel_tol) {
    CheckReport rep{"energy_identity"};
    const double e0 = s.l2_u.front() * s.l2_u.front() + s.l2_B.front() * s.l2_B.front();
    double dissip = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k > 0) {
            const double a = s.l2_grad_u[k - 1] * s.l2_grad_u[k - 1];
            const double b = s.l2_grad_u[k] * s.l2_grad_u[k];
            dissip += 0.5 * (s.t[k] - s.t[k - 1]) * (a + b);
        }
        const double e = s.l2_u[k] * s.l2_u[k] + s.l2_B[k] * s.l2_B[k];
        const double defect = std::abs(e - e0 + 2.0 * s.nu * dissip);
        check_sample(rep, s.t[k], defect, rel_tol * e0);
    }
    return rep;
}

CheckReport check_energy_inequality(const NormSeries& s) {
    CheckReport rep{"energy_inequality"};
    const double e0 = s.l2_u.front() * s.l2_u.front() + s.l2_B.front() * s.l2_B.front();
    double sup_u = 0.0, sup_b = 0.0, dissip = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        sup_u = std::max(sup_u, s.l2_u[k] * s.l2_u[k]);
        sup_b = std::max(sup_b, s.l2_B[k] * s.l2_B[k]);
        if (k > 0) {
            const double a = s.l2_grad_u[k - 1] * s.l2_grad_u[k - 1];
            const double b = s.l2_grad_u[k] * s.l2_grad_u[k];
            dissip += 0.5 * (s.t[k] - s.t[k - 1]) * (a + b);
        }
        check_sample(rep, s.t[k], sup_u + sup_b + s.nu * dissip, 2.0 * e0);
    }
    return rep;
}

CheckReport check_2d_aux_bound(const NormSeries& s) {
    CheckReport rep{"aux_bound_2d"};
    const double e0 = s.l2_u.front() * s.l2_u.front() + s.l2_B.front() * s.l2_B.front();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double rhs = 2.0 * (s.t[k] - s.t.front() + 1.0 / s.nu) * e0;
        check_sample(rep, s.t[k], s.int_u_hn2_sq[k], rhs);
    }
    return rep;
}

CheckReport check_time_derivative_bounds(const NormSeries& s, double c_td) {
    CheckReport rep{"time_derivative_bounds"};
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double rhs_u = s.nu * s.besov_lap_u[k] +
                             c_td * (s.besov_B[k] * s.besov_B[k] + s.besov_u_mid[k] * s.besov_u_mid[k]);
        check_sample(rep, s.t[k], s.dudt_besov[k], rhs_u);
        const double rhs_b = 2.0 * c_td * s.besov_B[k] * s.besov_u_mid[k];
        check_sample(rep, s.t[k], s.dbdt_besov[k], rhs_b);
    }
    return rep;
}

std::vector<CheckReport> bootstrap_monitor(const NormSeries& s, const ExistenceBudget& budget,
                                           const DimConstants& c) {
    std::vector<CheckReport> out;
    CheckReport ode{budget.dim == 2 ? "ode_xy_2d" : "ode_xy_3d"};
    CheckReport cap{budget.dim == 2 ? "xy_le_3m1" : "xy_le_m4"};
    CheckReport zcap{"z_le_cstar"};
    CheckReport aux{"aux_estimate_3d"};
    CheckReport energy3d{"besov_energy_3d"};

    const double t0 = s.t.front();
    const double e0 = s.l2_u.front() * s.l2_u.front() + s.l2_B.front() * s.l2_B.front();
    const double h0_sq = s.hhalf_u.front() * s.hhalf_u.front();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double t = s.t[k] - t0;
        if (t > budget.tstar) break;
        const double xy = s.xr[k] + s.yr[k];
        if (budget.dim == 2) {
            const double rhs = budget.m1 + budget.m2 * t +
                               budget.m3 * t * std::exp(2.0 * c.c1 * s.yr[k] / s.nu);
            check_sample(ode, s.t[k], xy, rhs);
            check_sample(cap, s.t[k], xy, 3.0 * budget.m1);
        } else {
            const double e2 = std::exp(2.0 * c.c1 * s.yr[k] / s.nu);
            const double rhs = budget.m1 + budget.m2 * t + c.c2 * budget.m3 * t * e2 +
                               (1.5 * c.c2 / s.nu) * budget.m3 * budget.m3 * t * t * e2 * e2 +
                               (4.0 * c.c2 * c.c3 / std::pow(s.nu, 3)) * std::pow(budget.m3, 4) *
                                   std::pow(t, 4) * e2 * e2 * e2 * e2;
            check_sample(ode, s.t[k], xy, rhs);
            check_sample(cap, s.t[k], xy, budget.m4);
            check_sample(zcap, s.t[k], s.zr[k], budget.cstar);
            const double z = s.zr[k];
            const double aux_rhs = h0_sq / s.nu + (8.0 * c.c3 / std::pow(s.nu, 3)) * h0_sq * h0_sq +
                                   (1.5 / s.nu) * z * z +
                                   (4.0 * c.c3 / std::pow(s.nu, 3)) * std::pow(z, 4);
            check_sample(aux, s.t[k], s.int_gradu_hhalf_sq[k], aux_rhs);
            check_sample(energy3d, s.t[k], s.int_l2u_sq[k] + s.int_gradu_hhalf_sq[k],
                         2.0 * t * e0 + aux_rhs);
        }
    }
    out.push_back(ode);
    out.push_back(cap);
    if (budget.dim == 3) {
        out.push_back(zcap);
        out.push_back(aux);
        out.push_back(energy3d);
    }
    return out;
}

SplitCheckResult check_split_bounds(const NormSeries& s, const SplitSeries& sp, const DimConstants& c,
                                    const ExistenceBudget& budget, double closure_tol,
                                    double mismatch_tol) {
    if (s.size() != sp.size()) throw std::invalid_argument("split series out of step with norm series");
    SplitCheckResult result;
    CheckReport closure{"split_closure"};
    CheckReport mismatch{"w_direct_vs_difference"};
    CheckReport vsup{"v_sup_le_z"};
    CheckReport vbound{"v_estimate"};
    CheckReport wbound{"w_estimate"};

    const double window = std::min(budget.t1, budget.t2);
    const double w_stop = s.nu / (2.0 * c.c4);
    const double h0_sq = s.hhalf_u.front() * s.hhalf_u.front();
    double sup_v_sq = 0.0, sup_w_sq = 0.0;
    const double t0 = sp.t.front();
    for (std::size_t k = 0; k < sp.size(); ++k) {
        const double t = sp.t[k] - t0;
        check_sample(closure, sp.t[k], sp.closure_err[k], closure_tol);
        check_sample(mismatch, sp.t[k], sp.w_mismatch[k], mismatch_tol);

        sup_v_sq = std::max(sup_v_sq, sp.v_hhalf[k] * sp.v_hhalf[k]);
        sup_w_sq = std::max(sup_w_sq, sp.w_hhalf[k] * sp.w_hhalf[k]);
        check_sample(vsup, sp.t[k], sp.v_hhalf[k], s.zr[k]);
        check_sample(vbound, sp.t[k], sup_v_sq + 2.0 * s.nu * sp.int_v_h32_sq[k],
                     3.0 * s.zr[k] * s.zr[k]);

        if (result.stopping_time_crossing == std::nullopt && sp.int_w_h32_sq[k] > w_stop)
            result.stopping_time_crossing = sp.t[k];
        const bool valid = t <= window && sp.int_w_h32_sq[k] <= w_stop;
        if (valid) {
            const double z = s.zr[k];
            const double rhs = (8.0 * c.c3 / (s.nu * s.nu)) * h0_sq * h0_sq +
                               (4.0 * c.c3 / (s.nu * s.nu)) * std::pow(z, 4);
            check_sample(wbound, sp.t[k], sup_w_sq + s.nu * sp.int_w_h32_sq[k], rhs);
        }
    }
    result.reports = {closure, mismatch, vsup, vbound, wbound};
    return result;
}

double chemin_ratio(const VectorField& v, const VectorField& w) {
    const double n_half = 0.5 * v.grid().dim();
    const double s = n_half - 1.0;
    const VectorField adv = advect(v, w);
    double lhs = 0.0;
    for (int d = 0; d < w.dim(); ++d)
        lhs += inner_product(fractional_laplacian(adv.comp(d), s), fractional_laplacian(w.comp(d), s));
    const double den = (sobolev_norm(v, n_half, false) * sobolev_norm(w, n_half, true) +
                        sobolev_norm(w, n_half, false) * sobolev_norm(v, n_half, true)) *
                       sobolev_norm(w, s, true);
    if (den == 0.0) throw std::domain_error("chemin_ratio: degenerate denominator");
    return lhs / den;
}

double commutator_ratio(const VectorField& vel, const ScalarField& f, const DyadicPartition& part) {
    const double n_half = 0.5 * vel.grid().dim();
    double num = 0.0;
    for (int j = part.jmin(); j <= part.jmax(); ++j)
        num += std::exp2(n_half * j) * l2_norm(commutator_qj(part, vel, f, j));
    auto grads = gradient(vel);
    const std::span<const ScalarField> gspan(grads.data(), grads.size());
    const double grad_binf = part.besov_norm(gspan, {n_half, 2.0, kInf, true});
    // L^inf of the gradient bundle via the pointwise Frobenius magnitude
    std::vector<std::vector<double>> phys(grads.size());
    for (std::size_t cidx = 0; cidx < grads.size(); ++cidx) phys[cidx] = transform_inverse(grads[cidx]);
    double grad_linf = 0.0;
    for (std::size_t x = 0; x < phys[0].size(); ++x) {
        double mag = 0.0;
        for (const auto& ph : phys) mag += ph[x] * ph[x];
        grad_linf = std::max(grad_linf, mag);
    }
    grad_linf = std::sqrt(grad_linf);
    const double den = std::max(grad_binf, grad_linf) * part.besov_norm(f, {n_half, 2.0, 1.0, true});
    if (den == 0.0) throw std::domain_error("commutator_ratio: degenerate denominator");
    return num / den;
}

double difference_pairing_term(const VectorField& w, const VectorField& B2, const VectorField& z) {
    return inner_product(advect(w, B2), z);
}

TruncationReport truncation_convergence(const ScalarField& f, double s, double k,
                                        std::span<const double> radii) {
    (void)k;
    if (radii.size() < 3) throw std::invalid_argument("truncation_convergence: need at least 3 radii");
    const auto& g = f.grid();
    TruncationReport rep;
    for (double radius : radii) {
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.xi_sq(i) <= radius * radius) continue;
            acc += std::pow(1.0 + g.xi_sq(i), s) * std::norm(f[i]);
        }
        rep.radii.push_back(radius);
        rep.errors.push_back(std::sqrt(acc / g.volume()));
    }
    // least-squares slope of log(err) against log(1/R), nonzero errors only
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < rep.radii.size(); ++i) {
        if (rep.errors[i] <= 0.0) continue;
        const double x = std::log(1.0 / rep.radii[i]);
        const double y = std::log(rep.errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) rep.slope = kInf;
    else rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return rep;
}

DifferenceReport difference_experiment(const MHDState& state0, const SolverConfig& cfg, double delta,
                                       std::uint64_t perturbation_seed, const DimConstants& c,
                                       double t_assert_end) {
    if (state0.u.grid().dim() != 3)
        throw std::invalid_argument("difference_experiment: the uniqueness argument is 3D only");

    InitParams pp;
    pp.kind = InitKind::random_spectrum;
    pp.amplitude_u = 1.0;
    pp.amplitude_B = 0.0;
    pp.alpha_u = 2.0;
    pp.seed = perturbation_seed;
    auto pert = make_initial_data(state0.u.grid_ptr(), pp).u;

    MHDState s1 = prepare_initial_state(state0, cfg);
    MHDState raw2 = state0;
    raw2.u += delta * pert;
    MHDState s2 = prepare_initial_state(raw2, cfg);

    auto part = DyadicPartition::build(state0.u.grid_ptr());
    const double n_half = 1.5;
    const BesovIndex mid{n_half, 2.0, 1.0, true};

    DifferenceReport rep;
    const auto n_steps = static_cast<long>(std::llround(cfg.t_end / cfg.dt));
    double integral = 0.0;  // int (||u2||^2 + ||B2||^2 + ||grad u2||) in B^{3/2}_{2,1}
    double prev_g = 0.0;
    double d0 = 0.0;

    auto record = [&](long i) {
        const double t = s1.t;
        const double dsq = std::pow(l2_norm(s1.u - s2.u), 2) + std::pow(l2_norm(s1.B - s2.B), 2);
        auto grads2 = gradient(s2.u);
        const double g_now = std::pow(part.besov_norm(s2.u, mid), 2) +
                             std::pow(part.besov_norm(s2.B, mid), 2) +
                             part.besov_norm(std::span<const ScalarField>(grads2.data(), grads2.size()), mid);
        if (!rep.t.empty()) integral += 0.5 * (t - rep.t.back()) * (g_now + prev_g);
        prev_g = g_now;
        if (rep.t.empty()) d0 = dsq;
        rep.t.push_back(t);
        rep.d.push_back(dsq);
        rep.envelope.push_back(d0 * std::exp(c.gronwall / cfg.nu * integral));
        rep.pairing.push_back(difference_pairing_term(s1.u - s2.u, s2.B, s1.B - s2.B));
        (void)i;
    };

    for (long i = 0; i < n_steps; ++i) {
        if (i % cfg.sample_every == 0) record(i);
        step(s1, cfg);
        step(s2, cfg);
    }
    record(n_steps);

    for (std::size_t k = 0; k < rep.t.size(); ++k) {
        if (rep.t[k] - rep.t.front() > t_assert_end) break;
        const double ratio = rep.envelope[k] > 0.0 ? rep.d[k] / rep.envelope[k]
                                                   : (rep.d[k] > 0.0 ? kInf : 0.0);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (rep.d[k] > rep.envelope[k] * kSlack && rep.d[k] > 1e-30) rep.passed = false;
    }
    return rep;
}

}  // namespace bmhd
