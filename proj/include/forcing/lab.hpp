#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "forcing/graph.hpp"
#include "forcing/graphon.hpp"
#include "forcing/quasirandom.hpp"

namespace forcing {

/// ceil((t + 1) / 2): the number of doublings paired with K_t.
constexpr int default_doubling_count(int t) { return (t + 2) / 2; }

/// Number of edges of K_t.
constexpr int clique_edges(int t) { return t * (t - 1) / 2; }

// ---------------------------------------------------------------------------
// Pointwise identity
//
// For a k-tuple of parts (x_1..x_k) the identity value is
//   prod_{i<j<=k} W(x_i,x_j) * E_y[ prod_{i<j<=t-k} W(y_i,y_j) prod_{i,j} W(x_i,y_j) ],
// i.e. the conditional density of K_t with k vertices pinned. On a graphon
// meeting both density constraints it equals p^{C(t,2)} for every tuple.
// ---------------------------------------------------------------------------

struct IdentityTuple {
    std::vector<int> parts;
    double value = 0.0;
    double residual = 0.0;
    /// Same quantity for K_{t-1} with x_2..x_k pinned (the factor shared by
    /// two tuples that differ in their first entry).
    double q = 0.0;
};

struct IdentityResidualReport {
    int t = 0;
    int k = 0;
    double p = 0.0;
    double target = 0.0;
    double max_residual = 0.0;
    std::vector<int> argmax_tuple;       ///< lexicographically smallest maximizer
    std::vector<IdentityTuple> per_tuple;  ///< filled only when requested
};

double identity_value(const StepGraphon& w, int t, int k, const std::vector<int>& tuple);
double identity_q(const StepGraphon& w, int t, int k, const std::vector<int>& tail);

/// Every k-tuple of parts is checked (each part has positive mass, so "almost
/// every tuple" means every tuple). Requires 3 <= t <= 6 and 1 <= k <= t.
IdentityResidualReport check_identity(const StepGraphon& w, double p, int t, int k, bool per_tuple = false);

// ---------------------------------------------------------------------------
// Cauchy-Schwarz chain d_j = t(T_j(K_t), W) >= d_{j-1}^2
// ---------------------------------------------------------------------------

struct ChainStep {
    double slack = 0.0;     ///< d_j - d_{j-1}^2
    double mean = 0.0;      ///< E[P], equals d_{j-1}
    double variance = 0.0;  ///< Var[P] of the conditional density on the doubled class
    bool equality_probe = false;  ///< slack <= kEqualitySlack
};

struct ChainRecord {
    int t = 0;
    int k = 0;
    std::vector<double> densities;  ///< d_0 .. d_k
    std::vector<ChainStep> steps;   ///< steps[j-1] relates d_j and d_{j-1}
    bool holds = true;              ///< every slack >= -kChainTolerance
};

inline constexpr double kChainTolerance = 1e-12;
inline constexpr double kEqualitySlack = 1e-9;

ChainRecord cs_chain_check(int t, int k, const StepGraphon& w);

// ---------------------------------------------------------------------------
// Forcing experiments
// ---------------------------------------------------------------------------

/// Densities of the pair (K_t, T_k(K_t)) and their deviations from
/// p^{e(K_t)} and p^{2^k e(K_t)}.
struct PairResiduals {
    double t_clique = 0.0;
    double t_doubled = 0.0;
    double r1 = 0.0;  ///< t_clique - p^{e}
    double r2 = 0.0;  ///< t_doubled - p^{2^k e}
    double max_abs() const;
};

PairResiduals pair_residuals(const StepGraphon& w, double p, int t, int k);

struct ForcingOptions {
    int t = 3;
    int k = -1;  ///< negative: default_doubling_count(t)
    double p = 0.5;
    int parts = 4;
    int trials = 100;
    std::uint64_t seed = 0;
    double tol = 1e-6;           ///< converged when R = r1^2 + r2^2 <= tol^2
    int max_iterations = 10000;
    double perturbation = 0.2;   ///< initial entries p + U(-a, a), clamped
    int threads = 1;
    bool adversarial = false;
    std::vector<double> lambdas = {1e0, 1e2, 1e4, 1e6, 1e8, 1e10, 1e12, 1e14, 1e16};
    int adversarial_starts = 4;

    int doublings() const { return k < 0 ? default_doubling_count(t) : k; }
};

struct TrialRecord {
    int index = 0;
    std::uint64_t seed = 0;
    StepGraphon graphon = StepGraphon::constant(0.5);
    PairResiduals residuals;
    bool converged = false;
    int iterations = 0;
    ConstancyReport distance;
};

struct ParetoPoint {
    double lambda = 0.0;
    int start = 0;
    double residual = 0.0;  ///< max(|r1|, |r2|)
    double l2 = 0.0;
    double linf = 0.0;
    StepGraphon graphon = StepGraphon::constant(0.5);
};

struct ForcingSummary {
    int converged = 0;
    double max_l2 = 0.0;    ///< over converged trials
    double max_linf = 0.0;  ///< over converged trials
};

struct ForcingExperimentResult {
    int t = 0;
    int k = 0;
    double p = 0.0;
    double tol = 0.0;
    std::vector<TrialRecord> trials;
    ForcingSummary summary;
    std::vector<ParetoPoint> adversarial;  ///< every adversarial run
    std::vector<ParetoPoint> frontier;     ///< non-dominated subset, ascending residual
};

/// Minimizes R(W) = r1^2 + r2^2 from `start` by projected gradient with
/// uniform part weights held fixed.
TrialRecord run_forcing_trial(const StepGraphon& start, const ForcingOptions& options);

/// Random near-constant start for trial seed `seed`.
StepGraphon perturbed_start(const ForcingOptions& options, std::uint64_t seed);

ForcingExperimentResult forcing_experiment(const ForcingOptions& options);

/// Non-dominated points (smaller residual, larger distance), ascending residual.
std::vector<ParetoPoint> pareto_frontier(std::vector<ParetoPoint> points);

/// Largest l2 distance among points with residual <= `residual`.
std::optional<double> distance_at_residual(const std::vector<ParetoPoint>& frontier, double residual);

// ---------------------------------------------------------------------------
// delta -> epsilon probe
// ---------------------------------------------------------------------------

struct DeltaRow {
    double delta = 0.0;
    double max_l2 = 0.0;
    double linf = 0.0;
    PairResiduals residuals;
    StepGraphon witness = StepGraphon::constant(0.5);
};

struct ProbeOptions {
    ForcingOptions base;
    std::vector<double> deltas = {0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    int starts = 4;
    double feasibility_tolerance = 1e-10;
};

/// For each delta, the largest distance to the constant graphon found among
/// graphons whose two densities lie within (1 +- delta) of their targets.
/// Every candidate found for any delta is checked against every delta, so
/// the reported distance never decreases with delta.
std::vector<DeltaRow> delta_epsilon_probe(const ProbeOptions& options);

// ---------------------------------------------------------------------------
// (K_2, K_3) contrast
// ---------------------------------------------------------------------------

/// Two-part graphon [[a, b], [b, 0]] with weights (1/2, 1/2), a = 2 - 2b and
/// b the root of (2-2b)^3 + 3(2-2b) b^2 = 1 in (0.5, 0.75): edge density 1/2
/// and triangle density 1/8 without being 1/2-quasirandom.
struct ContrastWitness {
    double a = 0.0;
    double b = 0.0;
    StepGraphon graphon = StepGraphon::constant(0.5);
    double edge_density = 0.0;
    double triangle_density = 0.0;
    ConstancyReport distance;
};

ContrastWitness contrast_witness();

}  // namespace forcing
