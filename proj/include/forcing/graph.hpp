#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace forcing {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Finite simple undirected graph on vertices 0..n-1.
///
/// Edges are stored normalized (u < v) and sorted lexicographically, so two
/// graphs with the same edge set compare equal and serialize identically.
class Graph {
public:
    Graph() = default;
    /// Throws InvalidArgument on loops, duplicate edges or endpoints outside
    /// [0, n). Edge orientation and order in the input are irrelevant.
    Graph(int n, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(Vertex u, Vertex v) const;
    std::vector<std::vector<Vertex>> adjacency() const;
    std::vector<int> degrees() const;

    /// Subgraph induced by `vertices`, relabeled to 0..|vertices|-1 in the
    /// given order.
    Graph induced(std::span<const Vertex> vertices) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

/// Disjoint union; the vertices of `b` are shifted by a.vertex_count().
Graph disjoint_union(const Graph& a, const Graph& b);

/// Graph with its vertices permuted: vertex v becomes perm[v].
Graph relabel(const Graph& g, std::span<const Vertex> perm);

Graph cycle_graph(int n);
Graph path_graph(int n);

/// A graph together with an ordered proper coloring V_1, ..., V_t.
///
/// Invariants: the classes partition the vertex set, no class is empty, and
/// every class is independent. Each class is stored sorted.
class ColoredGraph {
public:
    ColoredGraph(Graph graph, std::vector<std::vector<Vertex>> classes);

    const Graph& graph() const { return graph_; }
    const std::vector<std::vector<Vertex>>& classes() const { return classes_; }
    int class_count() const { return static_cast<int>(classes_.size()); }
    const std::vector<Vertex>& color_class(int index) const { return classes_.at(index); }
    /// Class index of every vertex.
    std::vector<int> color_of() const;

    friend bool operator==(const ColoredGraph&, const ColoredGraph&) = default;

private:
    Graph graph_;
    std::vector<std::vector<Vertex>> classes_;
};

/// K_t with singleton classes {0}, ..., {t-1}.
ColoredGraph complete_graph(int t);

/// Result of one doubling step together with where each vertex of the input
/// ended up in each copy.
struct DoublingStep {
    ColoredGraph result;
    std::vector<Vertex> copy0;  ///< identity: copy 0 keeps the original labels
    std::vector<Vertex> copy1;
};

/// Doubling on class `class_index` (0-based): two copies of F glued along
/// that class.
///
/// Copy 0 keeps the labels of F. The vertices of copy 1 outside the shared
/// class get labels n, n+1, ... in ascending order of their original label.
/// Classes keep their index; every class except the shared one becomes the
/// union of its two copies.
DoublingStep double_class_traced(const ColoredGraph& f, int class_index);
ColoredGraph double_class(const ColoredGraph& f, int class_index);

/// T_k(F): doubling on classes 0, 1, ..., k-1 in that order. k = 0 returns F.
ColoredGraph iterated_double(const ColoredGraph& f, int k);

/// Doubling along an arbitrary sequence of distinct class indices.
ColoredGraph double_in_order(const ColoredGraph& f, std::span<const int> order);

/// Largest vertex count accepted by are_isomorphic.
inline constexpr int kMaxIsomorphismVertices = 32;

/// Exact isomorphism test by colour refinement followed by backtracking.
/// Throws UnsupportedSize above kMaxIsomorphismVertices.
bool are_isomorphic(const Graph& g, const Graph& h);

}  // namespace forcing
