#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmhd/field.hpp"
#include "bmhd/littlewood_paley.hpp"
#include "bmhd/spectral_ops.hpp"

namespace bmhd {

// Raised when a run leaves its admissible state (NaN coefficients, CFL
// collapse, broken divergence constraint).
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double nu = 1.0;
    double dt = 1e-3;
    double t_end = 1.0;
    // truncation radius in physical frequency units; infinity = full lattice
    double radius = std::numeric_limits<double>::infinity();
    Dealias dealias = Dealias::padded;
    int sample_every = 1;
    std::uint64_t seed = 0;
    double cfl_safety = 0.5;
    int cfl_check_every = 10;
    // test hooks
    bool disable_nonlinear = false;  // u follows pure heat flow, B frozen
    bool freeze_u = false;           // du/dt = 0
};

struct MHDState {
    double t = 0.0;
    VectorField u;
    VectorField B;

    MHDState(VectorField u0, VectorField B0) : u(std::move(u0)), B(std::move(B0)) {}
};

// Time-sampled norm trajectories with trapezoid running integrals.
struct NormSeries {
    int dim = 0;
    double nu = 0.0;

    std::vector<double> t;
    std::vector<double> l2_u, l2_B, l2_grad_u;
    std::vector<double> hhalf_u;        // ||u||_{H-dot^{1/2}}
    std::vector<double> hn2_u;          // ||u||_{H^{n/2}} (inhomogeneous weight)
    std::vector<double> gradu_hhalf;    // ||grad u||_{H-dot^{1/2}} = ||u||_{H-dot^{3/2}}
    std::vector<double> besov_u_low;    // ||u||_{B-dot^{n/2-1}_{2,1}}
    std::vector<double> besov_u_mid;    // ||u||_{B-dot^{n/2}_{2,1}}
    std::vector<double> besov_B;        // ||B||_{B-dot^{n/2}_{2,1}}
    std::vector<double> besov_grad_u;   // ||grad u||_{B-dot^{n/2}_{2,1}}
    std::vector<double> besov_lap_u;    // ||Lap u||_{B-dot^{n/2-1}_{2,1}}
    std::vector<double> xr;             // X_R = besov_u_low
    std::vector<double> yr;             // Y_R = nu * int ||grad u||_{B-dot^{n/2}_{2,1}}
    std::vector<double> zr;             // Z_R = int ||B||^2_{B-dot^{n/2}_{2,1}}
    std::vector<double> int_l2u_sq;     // int ||u||^2_{L^2}
    std::vector<double> int_u_hn2_sq;   // int ||u||^2_{H^{n/2}}
    std::vector<double> int_gradu_hhalf_sq;  // int ||grad u||^2_{H-dot^{1/2}}
    std::vector<double> dudt_besov;     // ||du/dt||_{B-dot^{n/2-1}_{2,1}}
    std::vector<double> dbdt_besov;     // ||dB/dt||_{B-dot^{n/2-1}_{2,1}}

    std::size_t size() const { return t.size(); }

    // fixed CSV schema, first column t
    static const std::vector<std::string>& column_names();
    std::vector<double>& column(std::size_t i);
    const std::vector<double>& column(std::size_t i) const;
};

// Nonlinear stage forcings, all Leray-projected and truncated to B_R.
struct NonlinearTerms {
    VectorField adv_bb;  // Pi S_R (B . grad) B
    VectorField adv_uu;  // Pi S_R (u . grad) u
    VectorField db_dt;   // Pi S_R [(B . grad) u - (u . grad) B]
};

NonlinearTerms nonlinear_terms(const VectorField& u, const VectorField& B, const SolverConfig& cfg);

// du/dt = nu Lap u + Pi S_R[(B.grad)B - (u.grad)u],  dB/dt as above.
std::pair<VectorField, VectorField> rhs(const MHDState& state, const SolverConfig& cfg);

// Calderon pieces advanced in lockstep with the main state: h carries the
// heat flow of the data, v the magnetic forcing, w the velocity nonlinearity.
struct SplitState {
    VectorField h, v, w;
};

// One integrating-factor RK4 step; the viscous term is integrated exactly via
// exp(-nu |xi|^2 dt) factors, the remaining terms by classical RK4.  When
// `split` is given its tracks consume the exact stage forcings of the main
// state, so h + v + w reproduces u to round-off.  `k1` optionally supplies
// precomputed stage-1 forcings (they equal the forcings at `state`).
void step(MHDState& state, const SolverConfig& cfg, SplitState* split = nullptr,
          const NonlinearTerms* k1 = nullptr);

struct SplitSeries {
    std::vector<double> t;
    std::vector<double> h_hhalf, v_hhalf, w_hhalf;
    std::vector<double> h_h1, v_h1, w_h1;
    std::vector<double> h_h32, v_h32, w_h32;
    std::vector<double> int_h_h32_sq, int_v_h32_sq, int_w_h32_sq;
    std::vector<double> int_h_h1_4, int_v_h1_4, int_w_h1_4;
    std::vector<double> closure_err;  // ||u - (h+v+w)||_L2 / ||u||_L2
    std::vector<double> w_mismatch;   // ||w - (u-h-v)||_L2 / max(||w||_L2, eps)

    std::size_t size() const { return t.size(); }
    static const std::vector<std::string>& column_names();
    std::vector<double>& column(std::size_t i);
    const std::vector<double>& column(std::size_t i) const;
};

struct RunResult {
    MHDState state;
    NormSeries series;
    std::optional<SplitSeries> split;
    std::optional<SplitState> split_state;  // final Calderon pieces
};

// Integrate from state0 (truncated and projected first) to t_end, recording
// norms every sample_every steps and at the final time.  with_splitting
// co-integrates the Calderon pieces (3D).
RunResult run(const MHDState& state0, const SolverConfig& cfg, bool with_splitting = false);

// Prepares admissible initial state: project, truncate to B_R, symmetrize.
MHDState prepare_initial_state(const MHDState& raw, const SolverConfig& cfg);

}  // namespace bmhd
