#include "forcing/quasirandom.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "forcing/errors.hpp"
#include "forcing/sampling.hpp"

namespace forcing {

namespace {

void check_p(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("quasirandomness: p must lie in (0, 1]");
}

double pair_mass(double p, long long size) { return p * static_cast<double>(size * (size - 1)) / 2.0; }

double normalized(double raw, int n) { return raw / (static_cast<double>(n) * static_cast<double>(n)); }

// Lexicographic order of the sorted vertex lists of two bitmask subsets.
bool lex_less(std::uint32_t a, std::uint32_t b) {
    while (a && b) {
        const int la = std::countr_zero(a), lb = std::countr_zero(b);
        if (la != lb) return la < lb;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

std::vector<Vertex> members(const std::vector<char>& in) {
    std::vector<Vertex> out;
    for (std::size_t v = 0; v < in.size(); ++v)
        if (in[v]) out.push_back(static_cast<Vertex>(v));
    return out;
}

QuasirandomReport exact_search(const Graph& g, double p) {
    const int n = g.vertex_count();
    const auto adj = g.adjacency();
    std::vector<int> inside_degree(n, 0);
    std::uint32_t subset = 0, best_subset = 0;
    long long edges = 0, size = 0;
    double best = 0.0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < total; ++step) {
        const int v = std::countr_zero(step);
        const bool adding = !(subset >> v & 1);
        subset ^= std::uint32_t{1} << v;
        const int delta = adding ? 1 : -1;
        edges += delta * inside_degree[v];
        size += delta;
        for (int u : adj[v]) inside_degree[u] += delta;

        const double dev = std::abs(static_cast<double>(edges) - pair_mass(p, size));
        if (dev > best || (dev == best && lex_less(subset, best_subset))) {
            best = dev;
            best_subset = subset;
        }
    }
    QuasirandomReport report;
    report.p = p;
    report.exact = true;
    for (int v = 0; v < n; ++v)
        if (best_subset >> v & 1) report.witness.push_back(v);
    report.deviation = normalized(best, n);
    report.epsilon_star = report.deviation;
    return report;
}

class LocalSearch {
public:
    LocalSearch(const Graph& g, double p) : adj_(g.adjacency()), p_(p) {}

    // Greedy best-improvement single-vertex flips until no flip helps.
    std::pair<double, std::vector<char>> run(std::vector<char> inside) const {
        const int n = static_cast<int>(adj_.size());
        std::vector<int> inside_degree(n, 0);
        long long edges = 0, size = 0;
        for (int v = 0; v < n; ++v) {
            if (!inside[v]) continue;
            ++size;
            for (int u : adj_[v]) {
                ++inside_degree[u];
                if (inside[u] && u < v) ++edges;
            }
        }
        double current = std::abs(static_cast<double>(edges) - pair_mass(p_, size));
        while (true) {
            int best_v = -1;
            double best = current;
            for (int v = 0; v < n; ++v) {
                const long long e = inside[v] ? edges - inside_degree[v] : edges + inside_degree[v];
                const long long s = inside[v] ? size - 1 : size + 1;
                const double dev = std::abs(static_cast<double>(e) - pair_mass(p_, s));
                if (dev > best + 1e-9) {
                    best = dev;
                    best_v = v;
                }
            }
            if (best_v < 0) break;
            const int delta = inside[best_v] ? -1 : 1;
            edges += delta * inside_degree[best_v];
            size += delta;
            inside[best_v] = !inside[best_v];
            for (int u : adj_[best_v]) inside_degree[u] += delta;
            current = best;
        }
        return {current, std::move(inside)};
    }

private:
    std::vector<std::vector<Vertex>> adj_;
    double p_;
};

}  // namespace

double subset_deviation(const Graph& g, double p, const std::vector<Vertex>& subset) {
    if (g.vertex_count() == 0) return 0.0;
    std::vector<char> inside(g.vertex_count(), 0);
    for (Vertex v : subset) {
        if (v < 0 || v >= g.vertex_count()) throw InvalidArgument("subset_deviation: vertex out of range");
        inside[v] = 1;
    }
    long long edges = 0;
    for (auto [u, v] : g.edges()) edges += inside[u] && inside[v];
    const long long size = std::count(inside.begin(), inside.end(), 1);
    return normalized(std::abs(static_cast<double>(edges) - pair_mass(p, size)), g.vertex_count());
}

QuasirandomReport heuristic_quasirandomness(const Graph& g, double p, const QuasirandomOptions& options) {
    check_p(p);
    const int n = g.vertex_count();
    QuasirandomReport report;
    report.p = p;
    report.exact = false;
    if (n == 0) return report;

    std::vector<std::vector<char>> starts;
    {
        Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, -p);
        for (int v = 0; v < n; ++v) m(v, v) = 0.0;
        for (auto [u, v] : g.edges()) m(u, v) = m(v, u) = 1.0 - p;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        const auto& values = solver.eigenvalues();
        const int top = std::abs(values(0)) > std::abs(values(n - 1)) ? 0 : n - 1;
        const Eigen::VectorXd x = solver.eigenvectors().col(top);
        std::vector<char> positive(n), negative(n);
        for (int v = 0; v < n; ++v) {
            positive[v] = x(v) > 0;
            negative[v] = x(v) < 0;
        }
        starts.push_back(std::move(positive));
        starts.push_back(std::move(negative));
    }
    Rng rng(options.seed);
    for (int r = 0; r < options.random_starts; ++r) {
        std::vector<char> inside(n);
        for (int v = 0; v < n; ++v) inside[v] = rng.uniform() < 0.5;
        starts.push_back(std::move(inside));
    }

    const LocalSearch search(g, p);
    double best = -1.0;
    std::vector<Vertex> best_members;
    for (auto& start : starts) {
        auto [dev, inside] = search.run(std::move(start));
        auto found = members(inside);
        if (dev > best || (dev == best && found < best_members)) {
            best = dev;
            best_members = std::move(found);
        }
    }
    report.witness = std::move(best_members);
    report.deviation = normalized(best, n);
    report.epsilon_star = report.deviation;
    return report;
}

QuasirandomReport graph_quasirandomness(const Graph& g, double p, const QuasirandomOptions& options) {
    check_p(p);
    if (options.exact_max_n > 30) throw InvalidArgument("quasirandomness: exact enumeration is capped at 30 vertices");
    if (g.vertex_count() <= options.exact_max_n) {
        auto report = exact_search(g, p);
        return report;
    }
    return heuristic_quasirandomness(g, p, options);
}

double cut_distance(const StepGraphon& w, double p) {
    const int m = w.parts();
    if (m > kMaxCutNormParts)
        throw UnsupportedSize("cut norm: exact enumeration supports at most " + std::to_string(kMaxCutNormParts) +
                              " parts");
    // For a fixed row set S the best column set takes all positive (or all
    // negative) column sums, so only S needs enumerating.
    std::vector<double> column(m, 0.0);
    double best = 0.0;
    std::uint32_t subset = 0;
    for (std::uint32_t step = 1; step < (std::uint32_t{1} << m); ++step) {
        const int i = std::countr_zero(step);
        const double sign = (subset >> i & 1) ? -1.0 : 1.0;
        subset ^= std::uint32_t{1} << i;
        double positive = 0.0, negative = 0.0;
        for (int j = 0; j < m; ++j) {
            column[j] += sign * w.weight(i) * w.weight(j) * (w.value(i, j) - p);
            (column[j] > 0 ? positive : negative) += column[j];
        }
        best = std::max({best, positive, -negative});
    }
    return best;
}

RowOscillation row_oscillation(const StepGraphon& w) {
    RowOscillation out;
    for (int i = 0; i < w.parts(); ++i) {
        const auto& row = w.values()[i];
        const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
        const double spread = *hi - *lo;
        if (spread > out.c) {
            out.c = spread;
            out.witness_part = i;
        }
    }
    return out;
}

ConstancyReport graphon_constancy(const StepGraphon& w, double p) {
    ConstancyReport report;
    report.p = p;
    double squares = 0.0;
    for (int i = 0; i < w.parts(); ++i)
        for (int j = 0; j < w.parts(); ++j) {
            const double d = w.value(i, j) - p;
            report.linf = std::max(report.linf, std::abs(d));
            squares += w.weight(i) * w.weight(j) * d * d;
        }
    report.l2 = std::sqrt(squares);
    if (w.parts() <= kMaxCutNormParts) report.cut = cut_distance(w, p);
    report.oscillation = row_oscillation(w).c;
    return report;
}

}  // namespace forcing
