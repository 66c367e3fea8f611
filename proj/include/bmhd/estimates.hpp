#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bmhd/constants_table.hpp"
#include "bmhd/solver.hpp"

namespace bmhd {

// --- existence budgets -------------------------------------------------------

// Norms of the (truncated) initial data feeding the budget formulas.
struct InitialNorms {
    double l2_u = 0.0, l2_B = 0.0;
    double besov_u_low = 0.0;  // B-dot^{n/2-1}_{2,1}(u0)
    double besov_B = 0.0;      // B-dot^{n/2}_{2,1}(B0)
    double hhalf_u = 0.0;      // H-dot^{1/2}(u0), used in 3D
};

InitialNorms initial_norms(const MHDState& state, const DyadicPartition& part);

struct ExistenceBudget {
    int dim = 2;
    double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    double cstar = 0.0;                                      // 3D
    double t1 = std::numeric_limits<double>::infinity();     // 3D
    double t2 = std::numeric_limits<double>::infinity();     // 3D
    double tstar = 0.0;
};

ExistenceBudget budget_2d(const InitialNorms& d, double nu, const DimConstants& c);
ExistenceBudget budget_3d(const InitialNorms& d, double nu, const DimConstants& c, double t1);

// --- inequality checks over a recorded run ------------------------------------

struct Violation {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct CheckReport {
    std::string name;
    bool passed = true;
    double max_ratio = 0.0;  // worst lhs/rhs over the checked samples
    std::size_t samples = 0;
    std::vector<Violation> violations;

    CheckReport() = default;
    explicit CheckReport(std::string n) : name(std::move(n)) {}
};

// ||B(t)|| <= ||B0|| exp(c1 Y_R(t) / nu), reported as the log-ratio check.
CheckReport check_b_growth(const NormSeries& s, double c1);

// X_R + Y_R <= X_R(0) + c2 int ||u||^2_{H^{n/2}} + c2 int ||B||^2_{B^{n/2}_{2,1}}.
CheckReport check_u_estimate(const NormSeries& s, double c2);

// |E(t) - E(0) + 2 nu int ||grad u||^2| <= tol * E(0)  (trapezoid in time).
CheckReport check_energy_identity(const NormSeries& s, double rel_tol);

// sup E + nu int ||grad u||^2 <= 2 E(0).
CheckReport check_energy_inequality(const NormSeries& s);

// 2D: int ||u||^2_{H^1} <= 2 (t + 1/nu) E(0).
CheckReport check_2d_aux_bound(const NormSeries& s);

// ||du/dt|| <= nu ||Lap u|| + C (||B||^2 + ||u||^2),
// ||dB/dt|| <= 2 C ||B|| ||u||   (Besov norms as recorded).
CheckReport check_time_derivative_bounds(const NormSeries& s, double c_td);

// Sample-by-sample bootstrap inequalities on [0, min(T*, run end)].
std::vector<CheckReport> bootstrap_monitor(const NormSeries& s, const ExistenceBudget& budget,
                                           const DimConstants& c);

// Calderon piece bounds on the validity window t <= min(T1, T2) while the
// w stopping-time threshold nu/(2 c4) has not been crossed.  Also checks
// splitting closure and the w cross-validation on every sample.
struct SplitCheckResult {
    std::vector<CheckReport> reports;
    std::optional<double> stopping_time_crossing;  // first sample past nu/(2 c4)
};

SplitCheckResult check_split_bounds(const NormSeries& s, const SplitSeries& sp, const DimConstants& c,
                                    const ExistenceBudget& budget, double closure_tol = 1e-8,
                                    double mismatch_tol = 1e-7);

// --- pointwise functionals -----------------------------------------------------

// <Lambda^{n/2-1} (v.grad)w, Lambda^{n/2-1} w> normalized by the Chemin
// right-hand side; throws on a degenerate denominator.
double chemin_ratio(const VectorField& v, const VectorField& w);

// Commutator-estimate ratio || (2^{j n/2} ||Q_j||_2)_j ||_{l1} over
// ||grad v||_{B^{n/2}_{2,inf} cap L^inf} ||f||_{B^{n/2}_{2,1}}.
double commutator_ratio(const VectorField& vel, const ScalarField& f, const DyadicPartition& part);

// <(w.grad) B2, z> -- the pairing that blocks the 2D uniqueness argument;
// measured and logged, never asserted.
double difference_pairing_term(const VectorField& w, const VectorField& B2, const VectorField& z);

// --- truncation convergence ----------------------------------------------------

struct TruncationReport {
    std::vector<double> radii;
    std::vector<double> errors;  // ||S_R f - f||_{H^s}
    double slope = 0.0;          // log-log slope against 1/R; +inf if all zero
};

TruncationReport truncation_convergence(const ScalarField& f, double s, double k,
                                        std::span<const double> radii);

// --- difference / Gronwall experiment (3D) --------------------------------------

struct DifferenceReport {
    std::vector<double> t;
    std::vector<double> d;         // ||u1-u2||^2 + ||B1-B2||^2
    std::vector<double> envelope;  // D(0) exp((c/nu) int (...))
    bool passed = true;
    double max_ratio = 0.0;        // worst D/envelope inside the assertion window
    std::vector<double> pairing;   // logged <(w.grad)B2, z> trajectory
};

// Runs (u0, B0) and (u0 + delta * perturbation, B0) in lockstep and compares
// D(t) with the Gronwall envelope built from run 2.  Asserts on samples with
// t <= t_assert_end (pass infinity to assert everywhere).
DifferenceReport difference_experiment(const MHDState& state0, const SolverConfig& cfg, double delta,
                                       std::uint64_t perturbation_seed, const DimConstants& c,
                                       double t_assert_end);

}  // namespace bmhd
