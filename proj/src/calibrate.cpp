#include "bmhd/calibrate.hpp"

#include <cmath>
#include <numbers>

#include "bmhd/estimates.hpp"
#include "bmhd/initial_data.hpp"
#include "bmhd/paraproduct.hpp"
#include "bmhd/solver.hpp"
#include "bmhd/spectral_ops.hpp"

namespace bmhd {

namespace {

void take(double& slot, double value) {
    if (std::isfinite(value)) slot = std::max(slot, value);
}

void take_all(DimConstants& acc, const DimConstants& r) {
    take(acc.c1, r.c1);
    take(acc.c2, r.c2);
    take(acc.algebra, r.algebra);
    take(acc.embedding_linf, r.embedding_linf);
    take(acc.embedding_b0, r.embedding_b0);
    take(acc.para_t, r.para_t);
    take(acc.para_r, r.para_r);
    take(acc.commutator, r.commutator);
    take(acc.chemin, r.chemin);
    take(acc.adv_pairing, r.adv_pairing);
    take(acc.gronwall, r.gronwall);
    take(acc.deriv_bound, r.deriv_bound);
}

// d/dt of sum_j 2^{js} ||block_j x||_2 along dx/dt, by block-wise chain rule.
double besov_rate(const DyadicPartition& part, const VectorField& x, const VectorField& dxdt, double s) {
    double acc = 0.0;
    for (int j = part.jmin(); j <= part.jmax(); ++j) {
        const VectorField bx = part.hom_block(x, j);
        const VectorField bdx = part.hom_block(dxdt, j);
        const double nrm = l2_norm(bx);
        const double rate = nrm > 1e-300 ? inner_product(bdx, bx) / nrm : l2_norm(bdx);
        acc += std::exp2(s * j) * rate;
    }
    return acc;
}

// sum_j 2^{js} |<block_j a, block_j x>| / ||block_j x||  (the diagonal pairing)
double besov_pairing(const DyadicPartition& part, const VectorField& a, const VectorField& x, double s) {
    double acc = 0.0;
    for (int j = part.jmin(); j <= part.jmax(); ++j) {
        const VectorField bx = part.hom_block(x, j);
        const double nrm = l2_norm(bx);
        if (nrm <= 1e-300) continue;
        acc += std::exp2(s * j) * std::abs(inner_product(part.hom_block(a, j), bx)) / nrm;
    }
    return acc;
}

// Gronwall ratio for a pair of states under the given viscosity.
double gronwall_ratio(const DyadicPartition& part, const MHDState& s1, const MHDState& s2,
                      const SolverConfig& cfg) {
    const double n_half = 0.5 * s1.u.grid().dim();
    const BesovIndex mid{n_half, 2.0, 1.0, true};
    const auto r1 = rhs(s1, cfg);
    const auto r2 = rhs(s2, cfg);
    const VectorField w = s1.u - s2.u;
    const VectorField z = s1.B - s2.B;
    const double dsq = std::pow(l2_norm(w), 2) + std::pow(l2_norm(z), 2);
    if (dsq <= 1e-300) return 0.0;
    // d/dt D + nu ||grad w||^2, the left side the Gronwall argument bounds
    const double ddot = 2.0 * inner_product(w, r1.first - r2.first) +
                        2.0 * inner_product(z, r1.second - r2.second) +
                        cfg.nu * std::pow(sobolev_norm(w, 1.0, true), 2);
    auto grads2 = gradient(s2.u);
    const double g2 = std::pow(part.besov_norm(s2.u, mid), 2) + std::pow(part.besov_norm(s2.B, mid), 2) +
                      part.besov_norm(std::span<const ScalarField>(grads2.data(), grads2.size()), mid);
    if (g2 <= 0.0) return 0.0;
    return cfg.nu * ddot / (g2 * dsq);
}

DimConstants apply_margin(const DimConstants& raw, double margin) {
    DimConstants c;
    c.c1 = raw.c1 * margin;
    c.c2 = raw.c2 * margin;
    c.algebra = raw.algebra * margin;
    c.embedding_linf = raw.embedding_linf * margin;
    c.embedding_b0 = raw.embedding_b0 * margin;
    c.para_t = raw.para_t * margin;
    c.para_r = raw.para_r * margin;
    c.commutator = raw.commutator * margin;
    // the 2D diagonal pairing vanishes identically (skew symmetry at s = 0),
    // so the ratio floor absorbs round-off noise
    c.chemin = std::max(raw.chemin * margin, 1e-12);
    c.adv_pairing = raw.adv_pairing * margin;
    c.gronwall = raw.gronwall * margin;
    c.deriv_bound = raw.deriv_bound * margin;
    // splitting constants composed from the Young-inequality chain:
    // c5 = 3 * pairing (triangle split), c3 = 2 c5^2, c4 = 2 c5
    const double c5 = 3.0 * c.adv_pairing;
    c.c3 = 2.0 * c5 * c5;
    c.c4 = 2.0 * c5;
    return c;
}

void calibrate_dim(const CalibrationSpec& spec, int dim, double length, DimConstants& acc) {
    const int n = dim == 2 ? spec.n2d : spec.n3d;
    auto grid = make_grid(dim, n, length);
    auto part = DyadicPartition::build(grid);

    SolverConfig cfg;
    cfg.nu = 0.05;

    const std::uint64_t base = spec.seed * 1000003ULL + static_cast<std::uint64_t>(dim);
    for (int i = 0; i < spec.fields; ++i) {
        const double frac = spec.fields > 1 ? static_cast<double>(i) / (spec.fields - 1) : 0.0;
        InitParams p;
        p.kind = InitKind::random_spectrum;
        p.alpha_u = spec.alpha_lo + frac * (spec.alpha_hi - spec.alpha_lo);
        p.alpha_B = spec.alpha_hi - frac * (spec.alpha_hi - spec.alpha_lo);
        p.amplitude_u = 1.0;
        p.amplitude_B = 0.7;
        p.seed = base + static_cast<std::uint64_t>(i);
        auto data = make_initial_data(grid, p);
        take_all(acc, state_ratios(part, data.u, data.B));
    }

    // snapshots along short runs, matching the benchmark regimes
    auto snapshot_run = [&](InitParams p, double dt, int steps) {
        auto data = make_initial_data(grid, p);
        MHDState st = prepare_initial_state(MHDState(data.u, data.B), cfg);
        SolverConfig run_cfg = cfg;
        run_cfg.dt = dt;
        const int stride = std::max(1, steps / std::max(1, spec.snapshots / 2));
        for (int i = 0; i < steps; ++i) {
            if (i % stride == 0) take_all(acc, state_ratios(part, st.u, st.B));
            step(st, run_cfg);
        }
        take_all(acc, state_ratios(part, st.u, st.B));
    };

    InitParams rnd;
    rnd.kind = InitKind::random_spectrum;
    rnd.alpha_u = 2.5;
    rnd.alpha_B = 3.0;
    rnd.amplitude_u = 0.5;
    rnd.amplitude_B = 0.5;
    rnd.seed = base + 7777;

    if (dim == 2) {
        InitParams ot;
        ot.kind = InitKind::orszag_tang;
        snapshot_run(ot, 2e-3, 60);
        snapshot_run(rnd, 2e-3, 60);
    } else {
        snapshot_run(rnd, 2e-3, 40);

        // difference pairs for the Gronwall constant.  The binding
        // perturbations are magnetic (no dissipation on z), so sweep
        // low-mode z and w offsets and follow lockstep difference runs.
        auto d1 = make_initial_data(grid, rnd);
        InitParams pp = rnd;
        pp.seed = base + 8888;
        auto d2 = make_initial_data(grid, pp);
        for (double nu : {0.05, 0.5}) {
            SolverConfig gcfg;
            gcfg.nu = nu;
            gcfg.dt = 1e-3;
            const MHDState a = prepare_initial_state(MHDState(d1.u, d1.B), gcfg);
            take(acc.gronwall, gronwall_ratio(part, prepare_initial_state(MHDState(d2.u, d2.B), gcfg), a, gcfg));
            for (int mode_seed = 0; mode_seed < 6; ++mode_seed) {
                InitParams lp;
                lp.kind = InitKind::random_spectrum;
                lp.alpha_u = 1.0;
                lp.cutoff = 2.5;  // low-frequency perturbation shapes
                lp.amplitude_u = 1.0;
                lp.amplitude_B = 1.0;
                lp.seed = base + 9100 + static_cast<std::uint64_t>(mode_seed);
                auto lowp = make_initial_data(grid, lp);
                MHDState pert_z(a.u, a.B + 1e-4 * lowp.B);
                take(acc.gronwall, gronwall_ratio(part, prepare_initial_state(pert_z, gcfg), a, gcfg));
                MHDState pert_w(a.u + 1e-4 * lowp.u, a.B);
                take(acc.gronwall, gronwall_ratio(part, prepare_initial_state(pert_w, gcfg), a, gcfg));
            }
            // lockstep difference run: the perturbation evolves into the
            // adversarial shape on its own
            MHDState s1 = a;
            MHDState s2 = prepare_initial_state(MHDState(d1.u + 1e-4 * d2.u, d1.B + 1e-4 * d2.B), gcfg);
            for (int i = 0; i < 60; ++i) {
                take(acc.gronwall, gronwall_ratio(part, s1, s2, gcfg));
                step(s1, gcfg);
                step(s2, gcfg);
            }
        }
    }
}

}  // namespace

DimConstants state_ratios(const DyadicPartition& part, const VectorField& u, const VectorField& B) {
    const int dim = u.grid().dim();
    const double n_half = 0.5 * dim;
    SolverConfig cfg;  // full-lattice, padded products
    DimConstants r;

    const auto nl = nonlinear_terms(u, B, cfg);
    const BesovIndex low{n_half - 1.0, 2.0, 1.0, true};
    const BesovIndex mid{n_half, 2.0, 1.0, true};

    const double u_mid = part.besov_norm(u, mid);
    const double b_mid = part.besov_norm(B, mid);
    auto grads = gradient(u);
    const double gradu_mid = part.besov_norm(std::span<const ScalarField>(grads.data(), grads.size()), mid);
    const double u_hn2 = sobolev_norm(u, n_half, false);

    // B-growth rate: d/dt ||B||_{B^{n/2}_{2,1}} <= c1 ||grad u|| ||B||
    if (gradu_mid * b_mid > 0.0)
        r.c1 = std::max(0.0, besov_rate(part, B, nl.db_dt, n_half) / (gradu_mid * b_mid));

    // velocity estimate: transport pairing and the magnetic forcing route
    if (u_hn2 > 0.0)
        r.c2 = besov_pairing(part, nl.adv_uu, u, n_half - 1.0) / (u_hn2 * u_hn2);
    if (b_mid > 0.0)
        r.c2 = std::max(r.c2, part.besov_norm(nl.adv_bb, low) / (b_mid * b_mid));

    // time-derivative bounds, nonlinear parts
    if (u_mid > 0.0 || b_mid > 0.0)
        r.deriv_bound = part.besov_norm(nl.adv_bb - nl.adv_uu, low) / (b_mid * b_mid + u_mid * u_mid);
    if (u_mid * b_mid > 0.0)
        r.deriv_bound = std::max(r.deriv_bound, part.besov_norm(nl.db_dt, low) / (2.0 * b_mid * u_mid));

    // product and embedding ratios on the component pairs the proofs use
    auto pr = product_estimate_ratios(part, derivative(B.comp(0), dim - 1), u.comp(0));
    r.para_t = pr.t_ratio;
    r.para_r = pr.r_ratio;
    r.algebra = pr.algebra_ratio;
    auto pr2 = product_estimate_ratios(part, u.comp(0), B.comp(dim - 1));
    r.algebra = std::max(r.algebra, pr2.algebra_ratio);

    r.embedding_linf = std::max(embedding_ratio(u, part, EmbeddingTarget::lebesgue_inf),
                                embedding_ratio(B.comp(0), part, EmbeddingTarget::lebesgue_inf));
    r.embedding_b0 = embedding_ratio(u, part, EmbeddingTarget::besov_0_inf_inf);

    r.commutator = commutator_ratio(u, B.comp(0), part);
    r.chemin = std::max(chemin_ratio(u, B), chemin_ratio(u, u));

    if (dim == 3) {
        const double g_h1 = sobolev_norm(u, 1.0, true);
        const double w_h32 = sobolev_norm(B, 1.5, true);
        if (g_h1 > 0.0 && w_h32 > 0.0) {
            const double lhs = std::abs(inner_product(nl.adv_uu, fractional_laplacian(B, 1.0)));
            r.adv_pairing = lhs / (g_h1 * g_h1 * w_h32);
        }
    }
    return r;
}

ConstantsTable calibrate(const CalibrationSpec& spec) {
    if (spec.fields < 1) throw std::invalid_argument("calibrate: empty corpus");
    const double length = spec.box_length > 0.0 ? spec.box_length : 2.0 * std::numbers::pi;

    DimConstants raw2, raw3;
    calibrate_dim(spec, 2, length, raw2);
    calibrate_dim(spec, 3, length, raw3);

    ConstantsTable t;
    t.margin = spec.margin;
    t.corpus.n2d = spec.n2d;
    t.corpus.n3d = spec.n3d;
    t.corpus.box_length = length;
    t.corpus.fields = spec.fields;
    t.corpus.snapshots = spec.snapshots;
    t.corpus.alpha_lo = spec.alpha_lo;
    t.corpus.alpha_hi = spec.alpha_hi;
    t.corpus.seed = spec.seed;
    t.raw2 = raw2;
    t.raw3 = raw3;
    t.dim2 = apply_margin(raw2, spec.margin);
    t.dim3 = apply_margin(raw3, spec.margin);
    return t;
}

}  // namespace bmhd
