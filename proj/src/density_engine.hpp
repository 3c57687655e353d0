#pragma once

// Summation kernels shared by the density evaluators. Templated on the
// scalar so the same code yields plain values (long double) and gradients
// (Jet).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <span>
#include <type_traits>
#include <vector>

#include "forcing/density.hpp"
#include "forcing/errors.hpp"
#include "forcing/graph.hpp"
#include "forcing/graphon.hpp"
#include "jet.hpp"

namespace forcing::detail {

/// Upper bound on the number of leaves a direct summation may visit.
inline constexpr double kSummationBudget = 134217728.0;  // 2^27

template <class S>
S make_scalar(double v, int params) {
    if constexpr (std::is_same_v<S, Jet>)
        return Jet(v, params);
    else
        return static_cast<S>(v);
}

/// Neumaier-compensated sum for floating scalars, plain sum for jets.
template <class S>
class Accumulator {
public:
    explicit Accumulator(int params) : sum_(make_scalar<S>(0.0, params)) {}
    void add(const S& x) { sum_ += x; }
    S result() const { return sum_; }

private:
    S sum_;
};

template <>
class Accumulator<long double> {
public:
    explicit Accumulator(int) {}
    void add(long double x) {
        const long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    long double result() const { return sum_ + comp_; }

private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

/// Part weights and matrix entries lifted into the scalar type.
template <class S>
struct EntryTable {
    int parts = 0;
    int params = 0;
    std::vector<double> weights;
    std::vector<S> entries;  // row-major m x m

    const S& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * parts + j]; }
};

inline EntryTable<long double> value_table(const StepGraphon& w) {
    EntryTable<long double> t;
    t.parts = w.parts();
    t.weights = w.weights();
    for (int i = 0; i < t.parts; ++i)
        for (int j = 0; j < t.parts; ++j) t.entries.push_back(w.value(i, j));
    return t;
}

inline EntryTable<Jet> jet_table(const StepGraphon& w) {
    const int m = w.parts();
    if (m > kMaxGradientParts) throw UnsupportedSize("gradient: at most 8 parts are supported");
    EntryTable<Jet> t;
    t.parts = m;
    t.params = symmetric_parameter_count(m);
    t.weights = w.weights();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t.entries.push_back(Jet::variable(w.value(i, j), t.params, symmetric_index(m, i, j)));
    return t;
}

/// Structure of a conditional density: which free vertices touch which
/// pinned ones. Built once per (motif, pinned set).
class PinnedPlan {
public:
    PinnedPlan() = default;
    PinnedPlan(const Graph& motif, std::span<const Vertex> pinned) {
        const int n = motif.vertex_count();
        std::vector<int> pin_pos(n, -1);
        for (std::size_t i = 0; i < pinned.size(); ++i) {
            const Vertex v = pinned[i];
            if (v < 0 || v >= n) throw InvalidArgument("pinned density: pinned vertex outside the motif");
            if (pin_pos[v] != -1) throw InvalidArgument("pinned density: vertex pinned twice");
            pin_pos[v] = static_cast<int>(i);
        }
        pinned_count_ = static_cast<int>(pinned.size());
        const auto adj = motif.adjacency();

        // Free vertices ordered so that each one sees as many earlier
        // (pinned or free) neighbours as possible.
        std::vector<int> free_pos(n, -1);
        std::vector<bool> placed(n, false);
        for (Vertex v : pinned) placed[v] = true;
        std::vector<Vertex> order;
        for (int step = 0; step < n - pinned_count_; ++step) {
            Vertex best = -1;
            int best_links = -1;
            for (Vertex v = 0; v < n; ++v) {
                if (placed[v]) continue;
                int links = 0;
                for (Vertex u : adj[v]) links += placed[u];
                if (links > best_links) {
                    best_links = links;
                    best = v;
                }
            }
            placed[best] = true;
            free_pos[best] = static_cast<int>(order.size());
            order.push_back(best);
        }
        to_pinned_.resize(order.size());
        to_free_.resize(order.size());
        for (auto [u, v] : motif.edges()) {
            if (pin_pos[u] >= 0 && pin_pos[v] >= 0) {
                pinned_edges_.emplace_back(pin_pos[u], pin_pos[v]);
            } else if (pin_pos[u] >= 0 || pin_pos[v] >= 0) {
                const Vertex f = pin_pos[u] >= 0 ? v : u;
                const Vertex p = pin_pos[u] >= 0 ? u : v;
                to_pinned_[free_pos[f]].push_back(pin_pos[p]);
            } else {
                const int a = free_pos[u], b = free_pos[v];
                to_free_[std::max(a, b)].push_back(std::min(a, b));
            }
        }
    }

    int pinned_count() const { return pinned_count_; }
    int free_count() const { return static_cast<int>(to_pinned_.size()); }

    template <class S>
    S evaluate(std::span<const int> assignment, const EntryTable<S>& table) const {
        S base = make_scalar<S>(1.0, table.params);
        for (auto [a, b] : pinned_edges_) base = base * table.at(assignment[a], assignment[b]);
        Accumulator<S> acc(table.params);
        std::vector<int> parts(free_count(), 0);
        descend<S>(0, base, assignment, parts, table, acc);
        return acc.result();
    }

private:
    template <class S>
    void descend(int depth, const S& partial, std::span<const int> assignment, std::vector<int>& parts,
                 const EntryTable<S>& table, Accumulator<S>& acc) const {
        if constexpr (!std::is_same_v<S, Jet>) {
            if (partial == 0) return;
        }
        if (depth == free_count()) {
            acc.add(partial);
            return;
        }
        for (int x = 0; x < table.parts; ++x) {
            S term = partial * table.weights[x];
            for (int p : to_pinned_[depth]) term = term * table.at(x, assignment[p]);
            for (int f : to_free_[depth]) term = term * table.at(x, parts[f]);
            parts[depth] = x;
            descend<S>(depth + 1, term, assignment, parts, table, acc);
        }
    }

    int pinned_count_ = 0;
    std::vector<std::pair<int, int>> pinned_edges_;
    std::vector<std::vector<int>> to_pinned_;
    std::vector<std::vector<int>> to_free_;
};

inline void check_summation_budget(int parts, int free_vertices, const char* what) {
    if (std::pow(static_cast<double>(parts), free_vertices) > kSummationBudget)
        throw UnsupportedSize(std::string(what) +
                              ": direct summation over parts^free_vertices is too large; "
                              "use doubling_density for doubled motifs");
}

}  // namespace forcing::detail
