#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "forcing/graph.hpp"
#include "forcing/graphon.hpp"

namespace forcing {

/// How far a finite graph is from (eps, p)-quasirandom:
/// max over U of |e(U) - p * C(|U|, 2)| / n^2.
struct QuasirandomReport {
    double p = 0.0;
    double epsilon_star = 0.0;  ///< smallest eps certified by the search (== deviation)
    std::vector<Vertex> witness;  ///< sorted
    double deviation = 0.0;
    bool exact = false;  ///< false: deviation is a lower bound from local search
};

struct QuasirandomOptions {
    int exact_max_n = 22;  ///< exhaustive enumeration up to this many vertices (at most 30)
    int random_starts = 32;
    std::uint64_t seed = 0;
};

/// Normalized deviation of one subset.
double subset_deviation(const Graph& g, double p, const std::vector<Vertex>& subset);

/// Exact (Gray-code enumeration of all 2^n subsets) for n <= exact_max_n,
/// otherwise local search from the sign pattern of the top eigenvector of
/// A - pJ and from random starts. Throws InvalidArgument for p outside (0, 1].
QuasirandomReport graph_quasirandomness(const Graph& g, double p, const QuasirandomOptions& options = {});

/// The local-search lower bound regardless of n.
QuasirandomReport heuristic_quasirandomness(const Graph& g, double p, const QuasirandomOptions& options = {});

/// Distances of a step graphon from the constant graphon p.
struct ConstancyReport {
    double p = 0.0;
    double linf = 0.0;
    double l2 = 0.0;
    std::optional<double> cut;  ///< empty when m exceeds kMaxCutNormParts
    double oscillation = 0.0;
};

inline constexpr int kMaxCutNormParts = 15;

ConstancyReport graphon_constancy(const StepGraphon& w, double p);

/// max over part-subset rectangles S x T of |sum w_i w_j (values[i][j] - p)|.
double cut_distance(const StepGraphon& w, double p);

/// ess sup of f(x) = sup_{y1,y2} (W(x,y1) - W(x,y2)); on a step graphon f is
/// the spread of each row. Ties go to the first part.
struct RowOscillation {
    double c = 0.0;
    int witness_part = 0;
};

RowOscillation row_oscillation(const StepGraphon& w);

}  // namespace forcing
