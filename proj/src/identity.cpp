#include <cmath>
#include <numeric>
#include <string>

#include "forcing/density.hpp"
#include "forcing/errors.hpp"
#include "forcing/lab.hpp"

namespace forcing {

namespace {

std::vector<Vertex> first_vertices(int count) {
    std::vector<Vertex> v(count);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace

double identity_value(const StepGraphon& w, int t, int k, const std::vector<int>& tuple) {
    if (static_cast<int>(tuple.size()) != k) throw InvalidArgument("identity: tuple must have k entries");
    return pinned_density(complete_graph(t).graph(), first_vertices(k), tuple, w);
}

double identity_q(const StepGraphon& w, int t, int k, const std::vector<int>& tail) {
    if (k < 2) throw InvalidArgument("identity: Q needs k >= 2");
    if (static_cast<int>(tail.size()) != k - 1) throw InvalidArgument("identity: Q takes k - 1 pinned parts");
    return pinned_density(complete_graph(t - 1).graph(), first_vertices(k - 1), tail, w);
}

IdentityResidualReport check_identity(const StepGraphon& w, double p, int t, int k, bool per_tuple) {
    if (t < 3 || t > 6) throw InvalidArgument("check_identity: t must lie in [3, 6]");
    if (k < 1 || k > t) throw InvalidArgument("check_identity: k must lie in [1, t]");
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("check_identity: p must lie in (0, 1]");
    const int m = w.parts();
    if (std::pow(static_cast<double>(m), t) > 1e9)
        throw UnsupportedSize("check_identity: m^t evaluations exceed the budget");

    IdentityResidualReport report;
    report.t = t;
    report.k = k;
    report.p = p;
    report.target = std::pow(p, clique_edges(t));
    report.max_residual = -1.0;

    const Graph clique = complete_graph(t).graph();
    const auto pinned = first_vertices(k);
    std::vector<int> tuple(k, 0);
    // Enumerated in lexicographic order, so a strict comparison keeps the
    // smallest maximizer.
    while (true) {
        const double value = pinned_density(clique, pinned, tuple, w);
        const double residual = std::abs(value - report.target);
        if (residual > report.max_residual) {
            report.max_residual = residual;
            report.argmax_tuple = tuple;
        }
        if (per_tuple) {
            IdentityTuple row{tuple, value, residual, 0.0};
            if (k >= 2) row.q = identity_q(w, t, k, {tuple.begin() + 1, tuple.end()});
            report.per_tuple.push_back(std::move(row));
        }
        int pos = k - 1;
        while (pos >= 0 && ++tuple[pos] == m) tuple[pos--] = 0;
        if (pos < 0) break;
    }
    return report;
}

ChainRecord cs_chain_check(int t, int k, const StepGraphon& w) {
    if (t < 2) throw InvalidArgument("cs_chain_check: t must be at least 2");
    if (k < 0 || k > t) throw InvalidArgument("cs_chain_check: k must lie in [0, t]");
    const ColoredGraph clique = complete_graph(t);
    ChainRecord record;
    record.t = t;
    record.k = k;
    for (int j = 0; j <= k; ++j) record.densities.push_back(doubling_density(clique, j, w));

    for (int j = 1; j <= k; ++j) {
        const auto conditional = class_conditional_densities(clique, j - 1, j - 1, w);
        long double mean = 0.0L;
        for (std::size_t i = 0; i < conditional.mass.size(); ++i)
            mean += static_cast<long double>(conditional.mass[i]) * conditional.density[i];
        long double variance = 0.0L;
        for (std::size_t i = 0; i < conditional.mass.size(); ++i) {
            const long double d = conditional.density[i] - mean;
            variance += conditional.mass[i] * d * d;
        }
        ChainStep step;
        step.slack = record.densities[j] - record.densities[j - 1] * record.densities[j - 1];
        step.mean = static_cast<double>(mean);
        step.variance = static_cast<double>(variance);
        step.equality_probe = step.slack <= kEqualitySlack;
        if (step.slack < -kChainTolerance) record.holds = false;
        record.steps.push_back(step);
    }
    return record;
}

}  // namespace forcing
