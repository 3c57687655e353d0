#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <thread>

#include "forcing/density.hpp"
#include "forcing/errors.hpp"
#include "forcing/lab.hpp"
#include "forcing/optimize.hpp"
#include "forcing/sampling.hpp"

namespace forcing {

namespace {

std::vector<double> pack(const StepGraphon& w) {
    const int m = w.parts();
    std::vector<double> theta(symmetric_parameter_count(m));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) theta[symmetric_index(m, i, j)] = w.value(i, j);
    return theta;
}

int parts_for(std::size_t parameters) {
    int m = 0;
    while (static_cast<std::size_t>(symmetric_parameter_count(m)) < parameters) ++m;
    return m;
}

StepGraphon unpack(const std::vector<double>& theta) {
    const int m = parts_for(theta.size());
    std::vector values(m, std::vector(m, 0.0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) values[i][j] = theta[symmetric_index(m, i, j)];
    return StepGraphon::uniform(std::move(values));
}

void validate(const ForcingOptions& o) {
    if (o.t < 2 || o.t > 5) throw InvalidArgument("forcing_experiment: t must lie in [2, 5]");
    if (o.doublings() < 1 || o.doublings() > o.t) throw InvalidArgument("forcing_experiment: k must lie in [1, t]");
    if (!(o.p > 0.0 && o.p <= 1.0)) throw InvalidArgument("forcing_experiment: p must lie in (0, 1]");
    if (o.parts < 1 || o.parts > kMaxGradientParts) throw InvalidArgument("forcing_experiment: parts must lie in [1, 8]");
    if (o.trials < 1) throw InvalidArgument("forcing_experiment: at least one trial is required");
    if (!(o.tol > 0.0)) throw InvalidArgument("forcing_experiment: tol must be positive");
    if (o.threads < 1) throw InvalidArgument("forcing_experiment: threads must be at least 1");
}

struct Targets {
    double clique;
    double doubled;
};

Targets targets(double p, int t, int k) {
    const double e = clique_edges(t);
    return {std::pow(p, e), std::pow(p, e * std::pow(2.0, k))};
}

// Residuals of the pair and their gradients in packed coordinates.
struct ResidualJacobian {
    double r1, r2;
    std::vector<double> g1, g2;
};

ResidualJacobian residual_jacobian(const std::vector<double>& theta, double p, int t, int k) {
    const StepGraphon w = unpack(theta);
    const int m = w.parts();
    const ColoredGraph clique = complete_graph(t);
    const auto d1 = graphon_density_gradient(clique.graph(), w);
    const auto d2 = doubling_density_gradient(clique, k, w);
    const Targets target = targets(p, t, k);
    ResidualJacobian out{d1.value - target.clique, d2.value - target.doubled, {}, {}};
    out.g1.resize(theta.size());
    out.g2.resize(theta.size());
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            out.g1[symmetric_index(m, a, b)] = d1.gradient[a][b];
            out.g2[symmetric_index(m, a, b)] = d2.gradient[a][b];
        }
    return out;
}

// Squared weighted L2 distance to p (uniform weights) and its gradient.
double distance_squared(const std::vector<double>& theta, double p, std::vector<double>& gradient) {
    const int m = parts_for(theta.size());
    const double w2 = 1.0 / (static_cast<double>(m) * m);
    double d = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            const int idx = symmetric_index(m, a, b);
            const double mult = a == b ? w2 : 2.0 * w2;
            const double diff = theta[idx] - p;
            d += mult * diff * diff;
            gradient[idx] = 2.0 * mult * diff;
        }
    return d;
}

template <class Body>
void parallel_for(int count, int threads, Body body) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) body(i);
        });
}

// Weights of the squared distance in packed coordinates.
std::vector<double> distance_weights(std::size_t parameters) {
    const int m = parts_for(parameters);
    const double w2 = 1.0 / (static_cast<double>(m) * m);
    std::vector<double> mult(parameters);
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) mult[symmetric_index(m, a, b)] = a == b ? w2 : 2.0 * w2;
    return mult;
}

// Damped Gauss-Newton minimum-norm steps that move (r1, r2) into the boxes
// [-half1, half1] x [-half2, half2]. Violations are measured relative to the
// targets so both residuals count comparably.
std::vector<double> restore_band(std::vector<double> theta, double p, int t, int k, double half1, double half2) {
    const Targets target = targets(p, t, k);
    auto excess = [&](const ResidualJacobian& rj) {
        return std::array{rj.r1 - std::clamp(rj.r1, -half1, half1), rj.r2 - std::clamp(rj.r2, -half2, half2)};
    };
    auto size = [&](const std::array<double, 2>& e) { return std::hypot(e[0] / target.clique, e[1] / target.doubled); };
    auto rj = residual_jacobian(theta, p, t, k);
    for (int it = 0; it < 100; ++it) {
        const auto e = excess(rj);
        const double current = size(e);
        if (current == 0.0) break;
        double a11 = 0.0, a12 = 0.0, a22 = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            a11 += rj.g1[i] * rj.g1[i];
            a12 += rj.g1[i] * rj.g2[i];
            a22 += rj.g2[i] * rj.g2[i];
        }
        const double det = a11 * a22 - a12 * a12;
        if (!(det > 1e-14 * a11 * a22)) break;
        const double y1 = (a22 * e[0] - a12 * e[1]) / det;
        const double y2 = (a11 * e[1] - a12 * e[0]) / det;
        bool improved = false;
        for (double scale = 1.0; scale > 1e-6 && !improved; scale *= 0.5) {
            std::vector<double> trial = theta;
            for (std::size_t i = 0; i < theta.size(); ++i)
                trial[i] = std::clamp(theta[i] - scale * (rj.g1[i] * y1 + rj.g2[i] * y2), 0.0, 1.0);
            auto trial_rj = residual_jacobian(trial, p, t, k);
            if (size(excess(trial_rj)) < current) {
                theta = std::move(trial);
                rj = std::move(trial_rj);
                improved = true;
            }
        }
        if (!improved) break;
    }
    return theta;
}

struct PenaltyEval {
    double value;
    std::vector<double> gradient;
};

// Central differences of the penalty gradient (one-sided at the box edges),
// symmetrized.
template <class Penalty>
std::vector<double> penalty_hessian(const std::vector<double>& x, Penalty& penalty) {
    const std::size_t n = x.size();
    constexpr double h = 1e-6;
    std::vector<double> hess(n * n);
    std::vector<double> probe = x;
    for (std::size_t j = 0; j < n; ++j) {
        const double up = std::min(1.0, x[j] + h), down = std::max(0.0, x[j] - h);
        probe[j] = up;
        const auto gu = penalty(probe).gradient;
        probe[j] = down;
        const auto gd = penalty(probe).gradient;
        probe[j] = x[j];
        for (std::size_t i = 0; i < n; ++i) hess[i * n + j] = (gu[i] - gd[i]) / (up - down);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) hess[i * n + j] = hess[j * n + i] = 0.5 * (hess[i * n + j] + hess[j * n + i]);
    return hess;
}

template <class Penalty>
std::vector<std::pair<double, std::vector<double>>> continuation(const std::vector<double>& lambdas,
                                                                 std::vector<double> theta, double p, int max_iterations,
                                                                 Penalty penalty) {
    const std::size_t n = theta.size();
    const std::vector<double> mult = distance_weights(n);
    std::vector<std::pair<double, std::vector<double>>> stages;
    for (double lambda : lambdas) {
        SmoothObjective objective = [&](const std::vector<double>& x, std::vector<double>& g) {
            std::vector<double> dg(n);
            const double d = distance_squared(x, p, dg);
            const PenaltyEval pen = penalty(x);
            for (std::size_t i = 0; i < n; ++i) g[i] = lambda * pen.gradient[i] - dg[i];
            return lambda * pen.value - d;
        };
        ProjectedGradientOptions options;
        options.max_iterations = max_iterations;
        options.step_tolerance = 1e-15;
        options.stall_tolerance = 1e-14;
        options.preconditioner = [&](const std::vector<double>& x) {
            std::vector<double> h = penalty_hessian(x, penalty);
            for (double& v : h) v *= lambda;
            for (std::size_t i = 0; i < n; ++i) h[i * n + i] -= 2.0 * mult[i];
            return h;
        };
        theta = projected_gradient(objective, std::move(theta), options).x;
        stages.emplace_back(lambda, theta);
    }
    return stages;
}

}  // namespace

double PairResiduals::max_abs() const { return std::max(std::abs(r1), std::abs(r2)); }

PairResiduals pair_residuals(const StepGraphon& w, double p, int t, int k) {
    const ColoredGraph clique = complete_graph(t);
    const Targets target = targets(p, t, k);
    PairResiduals r;
    r.t_clique = graphon_density(clique.graph(), w);
    r.t_doubled = doubling_density(clique, k, w);
    r.r1 = r.t_clique - target.clique;
    r.r2 = r.t_doubled - target.doubled;
    return r;
}

StepGraphon perturbed_start(const ForcingOptions& options, std::uint64_t seed) {
    Rng rng(seed);
    const int m = options.parts;
    std::vector values(m, std::vector(m, options.p));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            values[i][j] = values[j][i] =
                std::clamp(options.p + rng.uniform(-options.perturbation, options.perturbation), 0.0, 1.0);
    return StepGraphon::uniform(std::move(values));
}

TrialRecord run_forcing_trial(const StepGraphon& start, const ForcingOptions& options) {
    const int t = options.t, k = options.doublings();
    const double p = options.p;
    for (double w : start.weights())
        if (std::abs(w - 1.0 / start.parts()) > 1e-15)
            throw InvalidArgument("forcing trial: part weights must be uniform");

    SmoothObjective objective = [&](const std::vector<double>& x, std::vector<double>& g) {
        const auto rj = residual_jacobian(x, p, t, k);
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * rj.r1 * rj.g1[i] + 2.0 * rj.r2 * rj.g2[i];
        return rj.r1 * rj.r1 + rj.r2 * rj.r2;
    };
    ProjectedGradientOptions pg;
    pg.max_iterations = options.max_iterations;
    pg.target = options.tol * options.tol;
    const auto solved = projected_gradient(objective, pack(start), pg);

    TrialRecord record;
    record.graphon = unpack(solved.x);
    record.residuals = pair_residuals(record.graphon, p, t, k);
    const double r = record.residuals.r1 * record.residuals.r1 + record.residuals.r2 * record.residuals.r2;
    record.converged = r <= pg.target;
    record.iterations = solved.iterations;
    record.distance = graphon_constancy(record.graphon, p);
    return record;
}

std::vector<ParetoPoint> pareto_frontier(std::vector<ParetoPoint> points) {
    std::sort(points.begin(), points.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        return a.residual != b.residual ? a.residual < b.residual : a.l2 > b.l2;
    });
    std::vector<ParetoPoint> frontier;
    for (auto& point : points)
        if (frontier.empty() || point.l2 > frontier.back().l2) frontier.push_back(std::move(point));
    return frontier;
}

std::optional<double> distance_at_residual(const std::vector<ParetoPoint>& frontier, double residual) {
    std::optional<double> best;
    for (const auto& point : frontier)
        if (point.residual <= residual) best = std::max(best.value_or(0.0), point.l2);
    return best;
}

ForcingExperimentResult forcing_experiment(const ForcingOptions& options) {
    validate(options);
    ForcingExperimentResult result;
    result.t = options.t;
    result.k = options.doublings();
    result.p = options.p;
    result.tol = options.tol;
    result.trials.resize(options.trials);

    parallel_for(options.trials, options.threads, [&](int i) {
        const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(i);
        TrialRecord record = run_forcing_trial(perturbed_start(options, seed), options);
        record.index = i;
        record.seed = seed;
        result.trials[i] = std::move(record);
    });
    for (const auto& trial : result.trials) {
        if (!trial.converged) continue;
        ++result.summary.converged;
        result.summary.max_l2 = std::max(result.summary.max_l2, trial.distance.l2);
        result.summary.max_linf = std::max(result.summary.max_linf, trial.distance.linf);
    }

    if (options.adversarial) {
        const int t = options.t, k = options.doublings();
        const double p = options.p;
        std::vector<std::vector<ParetoPoint>> runs(options.adversarial_starts);
        parallel_for(options.adversarial_starts, options.threads, [&](int s) {
            ForcingOptions wide = options;
            wide.perturbation = 0.5;
            const auto start = perturbed_start(wide, options.seed + 1000003ULL * (s + 1));
            auto penalty = [&](const std::vector<double>& x) {
                PenaltyEval e{0.0, std::vector<double>(x.size())};
                const auto rj = residual_jacobian(x, p, t, k);
                for (std::size_t i = 0; i < x.size(); ++i) e.gradient[i] = 2.0 * rj.r1 * rj.g1[i] + 2.0 * rj.r2 * rj.g2[i];
                e.value = rj.r1 * rj.r1 + rj.r2 * rj.r2;
                return e;
            };
            for (auto& [lambda, theta] : continuation(options.lambdas, pack(start), p, options.max_iterations, penalty)) {
                ParetoPoint point;
                point.lambda = lambda;
                point.start = s;
                point.graphon = unpack(theta);
                point.residual = pair_residuals(point.graphon, p, t, k).max_abs();
                const auto distance = graphon_constancy(point.graphon, p);
                point.l2 = distance.l2;
                point.linf = distance.linf;
                runs[s].push_back(std::move(point));
            }
        });
        for (auto& run : runs)
            for (auto& point : run) result.adversarial.push_back(std::move(point));
        result.frontier = pareto_frontier(result.adversarial);
    }
    return result;
}

std::vector<DeltaRow> delta_epsilon_probe(const ProbeOptions& options) {
    const ForcingOptions& base = options.base;
    validate(base);
    for (double d : options.deltas)
        if (!(d >= 0.0)) throw InvalidArgument("delta_epsilon_probe: deltas must be non-negative");
    const int t = base.t, k = base.doublings();
    const double p = base.p;
    const Targets target = targets(p, t, k);

    std::vector<std::vector<StepGraphon>> found(options.deltas.size());
    parallel_for(static_cast<int>(options.deltas.size()), base.threads, [&](int di) {
        const double delta = options.deltas[di];
        auto penalty = [&](const std::vector<double>& x) {
            PenaltyEval e{0.0, std::vector<double>(x.size())};
            const auto rj = residual_jacobian(x, p, t, k);
            const double v1 = std::max(0.0, std::abs(rj.r1) - delta * target.clique);
            const double v2 = std::max(0.0, std::abs(rj.r2) - delta * target.doubled);
            const double s1 = rj.r1 >= 0 ? 1.0 : -1.0, s2 = rj.r2 >= 0 ? 1.0 : -1.0;
            for (std::size_t i = 0; i < x.size(); ++i) e.gradient[i] = 2.0 * v1 * s1 * rj.g1[i] + 2.0 * v2 * s2 * rj.g2[i];
            e.value = v1 * v1 + v2 * v2;
            return e;
        };
        for (int s = 0; s < options.starts; ++s) {
            ForcingOptions wide = base;
            wide.perturbation = 0.5;
            const auto start = perturbed_start(wide, base.seed + 7919ULL * (di + 1) + 104729ULL * (s + 1));
            for (auto& [lambda, theta] : continuation(base.lambdas, pack(start), p, base.max_iterations, penalty)) {
                // Penalty optima sit just outside the band; also keep a copy
                // pulled into its middle half.
                found[di].push_back(unpack(restore_band(theta, p, t, k, 0.5 * delta * target.clique,
                                                        0.5 * delta * target.doubled)));
                found[di].push_back(unpack(theta));
            }
        }
    });

    std::vector<StepGraphon> candidates{StepGraphon::constant(p, base.parts), contrast_witness().graphon};
    for (auto& list : found)
        for (auto& w : list) candidates.push_back(std::move(w));

    std::vector<PairResiduals> residuals;
    std::vector<ConstancyReport> distances;
    for (const auto& w : candidates) {
        residuals.push_back(pair_residuals(w, p, t, k));
        distances.push_back(graphon_constancy(w, p));
    }

    std::vector<DeltaRow> rows;
    for (double delta : options.deltas) {
        DeltaRow row;
        row.delta = delta;
        row.max_l2 = -1.0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const bool feasible =
                std::abs(residuals[c].r1) <= delta * target.clique + options.feasibility_tolerance &&
                std::abs(residuals[c].r2) <= delta * target.doubled + options.feasibility_tolerance;
            if (feasible && distances[c].l2 > row.max_l2) {
                row.max_l2 = distances[c].l2;
                row.linf = distances[c].linf;
                row.residuals = residuals[c];
                row.witness = candidates[c];
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ContrastWitness contrast_witness() {
    auto cubic = [](double b) {
        const double a = 2.0 - 2.0 * b;
        return a * a * a + 3.0 * a * b * b - 1.0;
    };
    double lo = 0.5, hi = 0.75;  // cubic(lo) > 0 > cubic(hi)
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (cubic(mid) > 0.0 ? lo : hi) = mid;
    }
    ContrastWitness out;
    out.b = 0.5 * (lo + hi);
    out.a = 2.0 - 2.0 * out.b;
    out.graphon = StepGraphon({0.5, 0.5}, {{out.a, out.b}, {out.b, 0.0}});
    out.edge_density = graphon_density(complete_graph(2).graph(), out.graphon);
    out.triangle_density = graphon_density(complete_graph(3).graph(), out.graphon);
    out.distance = graphon_constancy(out.graphon, 0.5);
    return out;
}

}  // namespace forcing
