#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "forcing/density.hpp"
#include "forcing/errors.hpp"

namespace forcing {

namespace {

// Largest table (entries) the elimination strategy may build.
constexpr double kEliminationBudget = 5e7;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw UnsupportedSize("hom_count: count exceeds the 64-bit range");
    return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw UnsupportedSize("hom_count: count exceeds the 64-bit range");
    return r;
}

struct Factor {
    std::vector<int> scope;  // motif vertices, sorted
    std::vector<std::uint64_t> table;  // index = sum assign[scope[i]] * n^i
};

// Min-degree elimination order on the motif's interaction graph; returns the
// order and the size of the largest table it would create.
std::pair<std::vector<int>, double> elimination_order(const Graph& motif, int host_size) {
    const int n = motif.vertex_count();
    std::vector<std::set<int>> nb(n);
    for (auto [u, v] : motif.edges()) {
        nb[u].insert(v);
        nb[v].insert(u);
    }
    std::vector<bool> gone(n, false);
    std::vector<int> order;
    double worst = 1.0;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!gone[v] && (best < 0 || nb[v].size() < nb[best].size())) best = v;
        worst = std::max(worst, std::pow(static_cast<double>(host_size), static_cast<double>(nb[best].size() + 1)));
        for (int a : nb[best])
            for (int b : nb[best])
                if (a != b) nb[a].insert(b);
        for (int a : nb[best]) nb[a].erase(best);
        gone[best] = true;
        order.push_back(best);
    }
    return {order, worst};
}

std::uint64_t count_by_elimination(const Graph& motif, const Graph& host, const std::vector<int>& order) {
    const int n = host.vertex_count();
    std::vector<Factor> factors;
    {
        std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * n, 0);
        for (auto [a, b] : host.edges()) adj[static_cast<std::size_t>(a) * n + b] = adj[static_cast<std::size_t>(b) * n + a] = 1;
        for (auto [u, v] : motif.edges()) factors.push_back({{u, v}, adj});
    }

    for (int x : order) {
        std::vector<Factor> touching, rest;
        for (auto& f : factors)
            (std::find(f.scope.begin(), f.scope.end(), x) != f.scope.end() ? touching : rest).push_back(std::move(f));
        std::set<int> scope_set;
        for (const auto& f : touching) scope_set.insert(f.scope.begin(), f.scope.end());
        scope_set.erase(x);
        Factor out{{scope_set.begin(), scope_set.end()}, {}};

        // Joint scope: the new scope followed by x.
        std::vector<int> joint = out.scope;
        joint.push_back(x);
        std::vector<std::vector<int>> where(touching.size());
        for (std::size_t f = 0; f < touching.size(); ++f)
            for (int v : touching[f].scope)
                where[f].push_back(static_cast<int>(std::find(joint.begin(), joint.end(), v) - joint.begin()));

        std::size_t out_size = 1;
        for (std::size_t i = 0; i < out.scope.size(); ++i) out_size *= static_cast<std::size_t>(n);
        out.table.assign(out_size, 0);
        std::vector<int> assign(joint.size(), 0);
        for (std::size_t cell = 0; cell < out_size; ++cell) {
            std::size_t rem = cell;
            for (std::size_t i = 0; i < out.scope.size(); ++i) {
                assign[i] = static_cast<int>(rem % n);
                rem /= n;
            }
            std::uint64_t sum = 0;
            for (int value = 0; value < n; ++value) {
                assign.back() = value;
                std::uint64_t prod = 1;
                for (std::size_t f = 0; f < touching.size() && prod != 0; ++f) {
                    std::size_t index = 0;
                    for (std::size_t i = where[f].size(); i-- > 0;) index = index * n + assign[where[f][i]];
                    prod = checked_mul(prod, touching[f].table[index]);
                }
                sum = checked_add(sum, prod);
            }
            out.table[cell] = sum;
        }
        rest.push_back(std::move(out));
        factors = std::move(rest);
    }

    std::uint64_t total = 1;
    for (const auto& f : factors) total = checked_mul(total, f.table.at(0));
    return total;
}

class BacktrackingCounter {
public:
    BacktrackingCounter(const Graph& motif, const Graph& host)
        : host_adj_(host.adjacency()), n_(host.vertex_count()), matrix_(static_cast<std::size_t>(n_) * n_, 0) {
        for (auto [a, b] : host.edges()) matrix_[idx(a, b)] = matrix_[idx(b, a)] = 1;
        const int k = motif.vertex_count();
        const auto adj = motif.adjacency();
        std::vector<int> pos(k, -1);
        for (int step = 0; step < k; ++step) {
            int best = -1, best_links = -1;
            for (int v = 0; v < k; ++v) {
                if (pos[v] >= 0) continue;
                int links = 0;
                for (int u : adj[v]) links += pos[u] >= 0;
                if (links > best_links) {
                    best_links = links;
                    best = v;
                }
            }
            pos[best] = step;
            std::vector<int> back;
            for (int u : adj[best])
                if (pos[u] >= 0 && pos[u] < step) back.push_back(pos[u]);
            earlier_.push_back(std::move(back));
        }
        image_.assign(k, -1);
    }

    std::uint64_t run() { return earlier_.empty() ? 1 : descend(0); }

private:
    std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }

    bool fits(std::size_t depth, int candidate) const {
        for (int d : earlier_[depth])
            if (!matrix_[idx(candidate, image_[d])]) return false;
        return true;
    }

    std::uint64_t descend(std::size_t depth) {
        const bool last = depth + 1 == earlier_.size();
        std::uint64_t total = 0;
        auto visit = [&](int c) {
            if (!fits(depth, c)) return;
            if (last) {
                total = checked_add(total, 1);
            } else {
                image_[depth] = c;
                total = checked_add(total, descend(depth + 1));
            }
        };
        if (earlier_[depth].empty()) {
            if (last) return static_cast<std::uint64_t>(n_);
            for (int c = 0; c < n_; ++c) visit(c);
        } else {
            for (int c : host_adj_[image_[earlier_[depth].front()]]) visit(c);
        }
        return total;
    }

    std::vector<std::vector<int>> host_adj_;
    int n_;
    std::vector<char> matrix_;
    std::vector<std::vector<int>> earlier_;
    std::vector<int> image_;
};

int component_count(const Graph& g) {
    const auto adj = g.adjacency();
    std::vector<char> seen(g.vertex_count(), 0);
    int components = 0;
    for (int s = 0; s < g.vertex_count(); ++s) {
        if (seen[s]) continue;
        ++components;
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) seen[v] = 1, stack.push_back(v);
        }
    }
    return components;
}

}  // namespace

std::uint64_t hom_count(const Graph& motif, const Graph& host, HomStrategy strategy) {
    if (motif.vertex_count() == 0) return 1;
    if (host.vertex_count() == 0) return 0;
    const auto [order, worst] = elimination_order(motif, host.vertex_count());
    const bool elimination_fits = worst <= kEliminationBudget;
    const bool backtracking_fits = motif.vertex_count() <= kMaxBacktrackingMotif;

    switch (strategy) {
        case HomStrategy::Elimination:
            if (!elimination_fits) throw UnsupportedSize("hom_count: elimination tables exceed the budget");
            return count_by_elimination(motif, host, order);
        case HomStrategy::Backtracking:
            if (!backtracking_fits)
                throw UnsupportedSize("hom_count: backtracking supports motifs up to " +
                                      std::to_string(kMaxBacktrackingMotif) + " vertices");
            return BacktrackingCounter(motif, host).run();
        case HomStrategy::Automatic:
            break;
    }
    if (elimination_fits && backtracking_fits) {
        // Rough work estimates: elimination touches every table entry once per
        // host vertex, backtracking follows host edges from one root per component.
        const double n = host.vertex_count();
        const double mean_degree = 2.0 * host.edge_count() / n;
        const int components = component_count(motif);
        const double backtracking_work =
            std::pow(n, components) * std::pow(mean_degree, motif.vertex_count() - components);
        const double elimination_work = static_cast<double>(worst) * n;
        if (backtracking_work < elimination_work) return BacktrackingCounter(motif, host).run();
        return count_by_elimination(motif, host, order);
    }
    if (elimination_fits) return count_by_elimination(motif, host, order);
    if (backtracking_fits) return BacktrackingCounter(motif, host).run();
    throw UnsupportedSize("hom_count: motif too wide for elimination and too large for backtracking");
}

double hom_density(const Graph& motif, const Graph& host, HomStrategy strategy) {
    if (host.vertex_count() == 0) throw InvalidArgument("hom_density: host graph has no vertices");
    const long double count = static_cast<long double>(hom_count(motif, host, strategy));
    return static_cast<double>(count / std::pow(static_cast<long double>(host.vertex_count()), motif.vertex_count()));
}

}  // namespace forcing
