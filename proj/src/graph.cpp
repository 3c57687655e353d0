#include "forcing/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>

#include "forcing/errors.hpp"

namespace forcing {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw InvalidArgument("graph: vertex count must be non-negative");
    for (auto& [u, v] : edges_) {
        if (u < 0 || v < 0 || u >= n_ || v >= n_)
            throw InvalidArgument("graph: edge endpoint outside [0, n)");
        if (u == v) throw InvalidArgument("graph: loops are not allowed");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw InvalidArgument("graph: duplicate edge");
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

std::vector<std::vector<Vertex>> Graph::adjacency() const {
    std::vector<std::vector<Vertex>> adj(n_);
    for (auto [u, v] : edges_) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n_, 0);
    for (auto [u, v] : edges_) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

Graph Graph::induced(std::span<const Vertex> vertices) const {
    std::vector<int> position(n_, -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] < 0 || vertices[i] >= n_) throw InvalidArgument("graph: induced vertex out of range");
        position[vertices[i]] = static_cast<int>(i);
    }
    std::vector<Edge> kept;
    for (auto [u, v] : edges_)
        if (position[u] >= 0 && position[v] >= 0) kept.emplace_back(position[u], position[v]);
    return Graph(static_cast<int>(vertices.size()), std::move(kept));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<Edge> edges = a.edges();
    const int shift = a.vertex_count();
    for (auto [u, v] : b.edges()) edges.emplace_back(u + shift, v + shift);
    return Graph(a.vertex_count() + b.vertex_count(), std::move(edges));
}

Graph relabel(const Graph& g, std::span<const Vertex> perm) {
    if (static_cast<int>(perm.size()) != g.vertex_count())
        throw InvalidArgument("relabel: permutation size differs from vertex count");
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
    return Graph(g.vertex_count(), std::move(edges));
}

Graph cycle_graph(int n) {
    if (n < 3) throw InvalidArgument("cycle_graph: n must be at least 3");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(edges));
}

Graph path_graph(int n) {
    if (n < 1) throw InvalidArgument("path_graph: n must be at least 1");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

ColoredGraph::ColoredGraph(Graph graph, std::vector<std::vector<Vertex>> classes)
    : graph_(std::move(graph)), classes_(std::move(classes)) {
    if (classes_.empty()) throw InvalidArgument("colored graph: at least one color class is required");
    std::vector<int> color(graph_.vertex_count(), -1);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        auto& cls = classes_[c];
        if (cls.empty()) throw InvalidArgument("colored graph: empty color class");
        std::sort(cls.begin(), cls.end());
        for (Vertex v : cls) {
            if (v < 0 || v >= graph_.vertex_count())
                throw InvalidArgument("colored graph: class vertex outside [0, n)");
            if (color[v] != -1) throw InvalidArgument("colored graph: classes are not disjoint");
            color[v] = static_cast<int>(c);
        }
    }
    if (std::find(color.begin(), color.end(), -1) != color.end())
        throw InvalidArgument("colored graph: classes do not cover every vertex");
    for (auto [u, v] : graph_.edges())
        if (color[u] == color[v])
            throw InvalidArgument("colored graph: class " + std::to_string(color[u]) + " is not independent");
}

std::vector<int> ColoredGraph::color_of() const {
    std::vector<int> color(graph_.vertex_count());
    for (std::size_t c = 0; c < classes_.size(); ++c)
        for (Vertex v : classes_[c]) color[v] = static_cast<int>(c);
    return color;
}

ColoredGraph complete_graph(int t) {
    if (t < 1) throw InvalidArgument("complete_graph: t must be at least 1");
    std::vector<Edge> edges;
    for (int u = 0; u < t; ++u)
        for (int v = u + 1; v < t; ++v) edges.emplace_back(u, v);
    std::vector<std::vector<Vertex>> classes(t);
    for (int v = 0; v < t; ++v) classes[v] = {v};
    return ColoredGraph(Graph(t, std::move(edges)), std::move(classes));
}

DoublingStep double_class_traced(const ColoredGraph& f, int class_index) {
    if (class_index < 0 || class_index >= f.class_count())
        throw InvalidArgument("double: class index " + std::to_string(class_index) + " outside [0, " +
                              std::to_string(f.class_count()) + ")");
    const int n = f.graph().vertex_count();
    const auto color = f.color_of();

    std::vector<Vertex> copy0(n), copy1(n);
    std::iota(copy0.begin(), copy0.end(), 0);
    int next = n;
    for (Vertex v = 0; v < n; ++v) copy1[v] = color[v] == class_index ? v : next++;

    std::vector<Edge> edges = f.graph().edges();
    for (auto [u, v] : f.graph().edges()) edges.emplace_back(copy1[u], copy1[v]);

    std::vector<std::vector<Vertex>> classes(f.class_count());
    for (int c = 0; c < f.class_count(); ++c) {
        classes[c] = f.color_class(c);
        if (c != class_index)
            for (Vertex v : f.color_class(c)) classes[c].push_back(copy1[v]);
    }
    return {ColoredGraph(Graph(next, std::move(edges)), std::move(classes)), std::move(copy0), std::move(copy1)};
}

ColoredGraph double_class(const ColoredGraph& f, int class_index) {
    return double_class_traced(f, class_index).result;
}

ColoredGraph iterated_double(const ColoredGraph& f, int k) {
    if (k < 0 || k > f.class_count())
        throw InvalidArgument("iterated_double: k must lie in [0, t]");
    ColoredGraph current = f;
    for (int i = 0; i < k; ++i) current = double_class(current, i);
    return current;
}

ColoredGraph double_in_order(const ColoredGraph& f, std::span<const int> order) {
    std::vector<bool> used(f.class_count(), false);
    ColoredGraph current = f;
    for (int c : order) {
        if (c < 0 || c >= f.class_count()) throw InvalidArgument("double_in_order: class index out of range");
        if (used[c]) throw InvalidArgument("double_in_order: class doubled twice");
        used[c] = true;
        current = double_class(current, c);
    }
    return current;
}

namespace {

using Mask = std::uint64_t;

// Colour refinement run on both graphs at once so that colour ids are
// comparable between them.
std::vector<int> refine_jointly(const std::vector<Mask>& adj_g, const std::vector<Mask>& adj_h) {
    const int n = static_cast<int>(adj_g.size());
    auto neighbours = [&](int x) -> Mask { return x < n ? adj_g[x] : adj_h[x - n]; };
    std::vector<int> color(2 * n);
    for (int x = 0; x < 2 * n; ++x) color[x] = std::popcount(neighbours(x));

    std::size_t classes = 0;
    while (true) {
        std::map<std::vector<int>, int> ids;
        std::vector<int> next(2 * n);
        for (int x = 0; x < 2 * n; ++x) {
            std::vector<int> signature{color[x]};
            const int base = x < n ? 0 : n;
            for (Mask m = neighbours(x); m; m &= m - 1) signature.push_back(color[base + std::countr_zero(m)]);
            std::sort(signature.begin() + 1, signature.end());
            auto [it, _] = ids.try_emplace(std::move(signature), static_cast<int>(ids.size()));
            next[x] = it->second;
        }
        color = std::move(next);
        if (ids.size() == classes) break;
        classes = ids.size();
    }
    return color;
}

class IsomorphismSearch {
public:
    IsomorphismSearch(std::vector<Mask> adj_g, std::vector<Mask> adj_h, std::vector<int> color)
        : adj_g_(std::move(adj_g)), adj_h_(std::move(adj_h)), color_(std::move(color)), n_(adj_g_.size()) {
        order_vertices();
        image_.assign(n_, -1);
    }

    bool run() { return extend(0, 0); }

private:
    // Most-constrained first: prefer vertices with many already-ordered
    // neighbours, then those in small colour classes.
    void order_vertices() {
        std::vector<int> class_size(2 * n_, 0);
        for (std::size_t v = 0; v < n_; ++v) ++class_size[color_[v]];
        Mask placed = 0;
        for (std::size_t step = 0; step < n_; ++step) {
            int best = -1;
            std::pair<int, int> best_key{-1, 0};
            for (std::size_t v = 0; v < n_; ++v) {
                if (placed >> v & 1) continue;
                std::pair<int, int> key{std::popcount(adj_g_[v] & placed), -class_size[color_[v]]};
                if (key > best_key) {
                    best_key = key;
                    best = static_cast<int>(v);
                }
            }
            order_.push_back(best);
            placed |= Mask{1} << best;
        }
    }

    bool extend(std::size_t depth, Mask used) {
        if (depth == n_) return true;
        const int v = order_[depth];
        for (std::size_t w = 0; w < n_; ++w) {
            if ((used >> w & 1) || color_[n_ + w] != color_[v]) continue;
            bool consistent = true;
            for (std::size_t d = 0; d < depth && consistent; ++d) {
                const int u = order_[d];
                consistent = ((adj_g_[v] >> u) & 1) == ((adj_h_[w] >> image_[u]) & 1);
            }
            if (!consistent) continue;
            image_[v] = static_cast<int>(w);
            if (extend(depth + 1, used | Mask{1} << w)) return true;
            image_[v] = -1;
        }
        return false;
    }

    std::vector<Mask> adj_g_, adj_h_;
    std::vector<int> color_;
    std::size_t n_;
    std::vector<int> order_;
    std::vector<int> image_;
};

std::vector<Mask> adjacency_masks(const Graph& g) {
    std::vector<Mask> adj(g.vertex_count(), 0);
    for (auto [u, v] : g.edges()) {
        adj[u] |= Mask{1} << v;
        adj[v] |= Mask{1} << u;
    }
    return adj;
}

}  // namespace

bool are_isomorphic(const Graph& g, const Graph& h) {
    if (g.vertex_count() > kMaxIsomorphismVertices || h.vertex_count() > kMaxIsomorphismVertices)
        throw UnsupportedSize("are_isomorphic: graphs above " + std::to_string(kMaxIsomorphismVertices) +
                              " vertices are not supported");
    if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) return false;
    const int n = g.vertex_count();
    auto adj_g = adjacency_masks(g);
    auto adj_h = adjacency_masks(h);
    auto color = refine_jointly(adj_g, adj_h);

    std::vector<int> hist_g(2 * n, 0), hist_h(2 * n, 0);
    for (int x = 0; x < n; ++x) {
        ++hist_g[color[x]];
        ++hist_h[color[n + x]];
    }
    if (hist_g != hist_h) return false;
    return IsomorphismSearch(std::move(adj_g), std::move(adj_h), std::move(color)).run();
}

}  // namespace forcing
