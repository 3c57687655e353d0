#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forcing/graph.hpp"
#include "forcing/graphon.hpp"

namespace forcing {

enum class HomStrategy {
    Automatic,    ///< elimination when its tables fit, otherwise backtracking
    Backtracking, ///< direct enumeration, motifs up to kMaxBacktrackingMotif vertices
    Elimination,  ///< variable elimination along a min-degree order (a tree decomposition DP)
};

inline constexpr int kMaxBacktrackingMotif = 12;

/// Number of maps V(motif) -> V(host) sending every edge to an edge.
/// Throws UnsupportedSize when neither strategy applies or the count does
/// not fit in 64 bits.
std::uint64_t hom_count(const Graph& motif, const Graph& host, HomStrategy strategy = HomStrategy::Automatic);

/// hom_count / n^{|V(motif)|}. Throws InvalidArgument for an empty host.
double hom_density(const Graph& motif, const Graph& host, HomStrategy strategy = HomStrategy::Automatic);

/// t(F, W) by direct summation over all maps V(F) -> parts.
/// Throws UnsupportedSize when m^{|V(F)|} exceeds the summation budget; use
/// doubling_density for doubled motifs.
double graphon_density(const Graph& motif, const StepGraphon& w);

/// Conditional density with the vertices in `pinned` fixed to the parts in
/// `assignment` (same order). Free vertices are integrated against the part
/// weights; pinned vertices carry no weight; an edge between two pinned
/// vertices contributes its fixed entry.
double pinned_density(const Graph& motif, std::span<const Vertex> pinned, std::span<const int> assignment,
                      const StepGraphon& w);

struct PinnedDensity {
    Graph motif;
    std::vector<Vertex> pinned;
    std::vector<int> assignment;
    double value = 0.0;
};

PinnedDensity make_pinned_density(const Graph& motif, std::vector<Vertex> pinned, std::vector<int> assignment,
                                  const StepGraphon& w);

/// t(T_k(F), W) evaluated through the doubling recursion
///   t(T(F'), W) = sum_a w(a) * P(F' | doubled class = a)^2,
/// memoizing conditional densities level by level, outermost doubling first.
double doubling_density(const ColoredGraph& f, int k, const StepGraphon& w);

/// Conditional densities of T_level(F) with color class `class_index`
/// pinned, over every assignment of that class to parts. `mass[i]` is the
/// product of the part weights of assignment i.
struct ClassConditional {
    std::vector<double> mass;
    std::vector<double> density;
};

ClassConditional class_conditional_densities(const ColoredGraph& f, int level, int class_index,
                                             const StepGraphon& w);

/// Density together with its gradient with respect to the symmetric entries:
/// gradient[a][b] = gradient[b][a] = d t / d theta_ab where theta_ab is the
/// shared value of W on the rectangles a x b and b x a.
struct DensityGradient {
    double value = 0.0;
    std::vector<std::vector<double>> gradient;
};

/// Analytic gradient assembled from two-vertex pinned densities of F minus
/// one edge.
DensityGradient graphon_density_gradient(const Graph& motif, const StepGraphon& w);

/// Gradient of doubling_density, propagated through the recursion in
/// forward mode. Supports up to kMaxGradientParts parts.
inline constexpr int kMaxGradientParts = 8;
DensityGradient doubling_density_gradient(const ColoredGraph& f, int k, const StepGraphon& w);

}  // namespace forcing
