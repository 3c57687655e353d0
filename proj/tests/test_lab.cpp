#include "doctest.h"

#include <cmath>
#include <random>
#include <thread>

#include "forcing/density.hpp"
#include "forcing/errors.hpp"
#include "forcing/lab.hpp"
#include "forcing/sampling.hpp"
#include "oracles.hpp"

using namespace forcing;

namespace {

const StepGraphon two_part({0.5, 0.5}, {{0.3, 0.7}, {0.7, 0.3}});

// Conditional density of K_t with the first k vertices sent to `tuple`,
// summed over every placement of the remaining t - k vertices.
double brute_identity(const StepGraphon& w, int t, const std::vector<int>& tuple) {
    const int k = static_cast<int>(tuple.size()), m = w.parts(), free = t - k;
    double total = 0.0;
    std::vector<int> y(free, 0);
    while (true) {
        std::vector<int> parts = tuple;
        parts.insert(parts.end(), y.begin(), y.end());
        double term = 1.0;
        for (int i : y) term *= w.weight(i);
        for (int i = 0; i < t; ++i)
            for (int j = i + 1; j < t; ++j) term *= w.value(parts[i], parts[j]);
        total += term;
        int pos = free - 1;
        while (pos >= 0 && ++y[pos] == m) y[pos--] = 0;
        if (pos < 0) break;
    }
    return total;
}

}  // namespace

TEST_CASE("identity residual vanishes on constant graphons") {
    for (auto [t, k] : {std::pair{3, 2}, {4, 3}, {5, 3}, {6, 4}, {4, 2}, {5, 5}})
        for (int m : {1, 2, 3})
            for (double p : {0.3, 0.5, 1.0}) {
                const auto r = check_identity(StepGraphon::constant(p, m), p, t, k);
                CHECK(r.max_residual <= 1e-12);
                CHECK(r.target == doctest::Approx(std::pow(p, t * (t - 1) / 2)).epsilon(1e-15));
            }
    const auto r = check_identity(StepGraphon::constant(0.5, 2), 0.5, 4, 3, true);
    REQUIRE(r.per_tuple.size() == 8);
    for (const auto& row : r.per_tuple) CHECK(row.value == doctest::Approx(std::pow(2.0, -6)).epsilon(1e-14));
}

TEST_CASE("two-part worked example") {
    const auto r = check_identity(two_part, 0.5, 3, 2, true);
    REQUIRE(r.per_tuple.size() == 4);
    // Off-diagonal tuples: 0.7 * (0.5 * 0.3 * 0.7 + 0.5 * 0.7 * 0.3) = 0.147.
    CHECK(r.per_tuple[1].parts == std::vector<int>{0, 1});
    CHECK(r.per_tuple[1].value == doctest::Approx(0.147).epsilon(1e-14));
    CHECK(r.per_tuple[1].residual == doctest::Approx(0.022).epsilon(1e-12));
    CHECK(r.per_tuple[2].residual == doctest::Approx(0.022).epsilon(1e-12));
    // Diagonal tuples: 0.3 * (0.5 * 0.09 + 0.5 * 0.49) = 0.087.
    CHECK(r.per_tuple[0].value == doctest::Approx(0.087).epsilon(1e-14));
    CHECK(r.max_residual == doctest::Approx(0.038).epsilon(1e-12));
    CHECK(r.argmax_tuple == std::vector<int>{0, 0});
    CHECK(std::abs(identity_value(two_part, 3, 2, r.argmax_tuple) - r.target) ==
          doctest::Approx(r.max_residual).epsilon(1e-12));
    // Q for t = 3, k = 2 is the degree of the second part.
    CHECK(r.per_tuple[1].q == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("identity values match brute force on random graphons") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 1 + trial % 4;
        const auto w = oracle::random_graphon(rng, m);
        const int t = 3 + trial % 3, k = 2 + trial % 2;
        const auto r = check_identity(w, 0.5, t, k, true);
        double max_residual = 0.0;
        for (const auto& row : r.per_tuple) {
            CHECK(row.value == doctest::Approx(brute_identity(w, t, row.parts)).epsilon(1e-12));
            const std::vector<int> tail(row.parts.begin() + 1, row.parts.end());
            CHECK(row.q == doctest::Approx(brute_identity(w, t - 1, tail)).epsilon(1e-12));
            max_residual = std::max(max_residual, row.residual);
        }
        CHECK(r.max_residual == max_residual);
        CHECK(std::abs(identity_value(w, t, k, r.argmax_tuple) - r.target) ==
              doctest::Approx(r.max_residual).epsilon(1e-12));
    }
}

TEST_CASE("identity validation") {
    const auto w = StepGraphon::constant(0.5, 2);
    CHECK_THROWS_AS(check_identity(w, 0.5, 2, 2), InvalidArgument);
    CHECK_THROWS_AS(check_identity(w, 0.5, 7, 4), InvalidArgument);
    CHECK_THROWS_AS(check_identity(w, 0.5, 4, 0), InvalidArgument);
    CHECK_THROWS_AS(check_identity(w, 0.0, 4, 3), InvalidArgument);
    CHECK_THROWS_AS(identity_value(w, 4, 3, {0, 1}), InvalidArgument);
}

TEST_CASE("nonconstant graphons violate the identity") {
    std::mt19937_64 rng(5);
    for (auto [t, k] : {std::pair{3, 2}, {4, 3}, {5, 3}}) {
        int checked = 0;
        while (checked < 100) {
            const auto w = oracle::random_graphon(rng, 2 + checked % 3);
            const double p = 0.2 + 0.6 * std::uniform_real_distribution<double>()(rng);
            if (graphon_constancy(w, p).linf <= 0.05) continue;
            ++checked;
            CHECK(check_identity(w, p, t, k).max_residual > 1e-10);
        }
    }
}

TEST_CASE("Cauchy-Schwarz chain") {
    SUBCASE("constant graphon") {
        const auto r = cs_chain_check(4, 3, StepGraphon::constant(0.5, 3));
        REQUIRE(r.densities.size() == 4);
        for (int j = 0; j <= 3; ++j)
            CHECK(r.densities[j] == doctest::Approx(std::pow(0.5, 6 * (1 << j))).epsilon(1e-13));
        CHECK(r.densities[3] == doctest::Approx(std::pow(0.5, 48)).epsilon(1e-13));
        for (const auto& step : r.steps) {
            CHECK(std::abs(step.slack) <= 1e-12);
            CHECK(step.variance <= 1e-12);
            CHECK(step.equality_probe);
        }
        CHECK(r.holds);
    }
    SUBCASE("two-part example is strict") {
        const auto r = cs_chain_check(3, 2, two_part);
        CHECK(r.densities[0] == doctest::Approx(0.117).epsilon(1e-14));
        CHECK(r.densities[2] == doctest::Approx(1.8819872e-4).epsilon(1e-10));
        CHECK(r.densities[2] > std::pow(r.densities[0], 4));
        CHECK(r.steps[0].slack > 0.0);
        CHECK(r.holds);
    }
    SUBCASE("t = 2 reaches the four-cycle") {
        std::mt19937_64 rng(8);
        for (int trial = 0; trial < 50; ++trial) {
            const auto w = oracle::random_graphon(rng, 3);
            const auto r = cs_chain_check(2, 2, w);
            const double edge = oracle::graphon_density(complete_graph(2).graph(), w);
            const double c4 = oracle::graphon_density(cycle_graph(4), w);
            CHECK(r.densities[0] == doctest::Approx(edge).epsilon(1e-13));
            CHECK(r.densities[2] == doctest::Approx(c4).epsilon(1e-13));
            CHECK(c4 >= std::pow(edge, 4) - 1e-12);
            CHECK(r.holds);
        }
    }
    SUBCASE("slack is the variance of the conditional density") {
        std::mt19937_64 rng(9);
        for (int trial = 0; trial < 60; ++trial) {
            const auto w = oracle::random_graphon(rng, 1 + trial % 5);
            const int t = 3 + trial % 2;
            const auto r = cs_chain_check(t, default_doubling_count(t), w);
            for (std::size_t j = 0; j < r.steps.size(); ++j) {
                CHECK(r.steps[j].slack >= -kChainTolerance);
                CHECK(r.steps[j].mean == doctest::Approx(r.densities[j]).epsilon(1e-12));
                CHECK(std::abs(r.steps[j].variance - r.steps[j].slack) <= 1e-14 + 1e-9 * std::abs(r.steps[j].slack));
            }
            CHECK(r.holds);
        }
    }
}

TEST_CASE("pair residuals agree with finite-graph densities") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const Graph g = oracle::random_graph(rng, 6 + trial, 0.6);
        const auto r = pair_residuals(StepGraphon::of_graph(g), 0.5, 3, 2);
        CHECK(r.t_clique == doctest::Approx(hom_density(complete_graph(3).graph(), g)).epsilon(1e-12));
        CHECK(r.t_doubled ==
              doctest::Approx(hom_density(iterated_double(complete_graph(3), 2).graph(), g)).epsilon(1e-12));
        CHECK(r.r1 == doctest::Approx(r.t_clique - 0.125).epsilon(1e-15));
    }
    const Graph sampled = w_random(StepGraphon::constant(0.5), 10, 4);
    const auto r = pair_residuals(StepGraphon::of_graph(sampled), 0.5, 3, 2);
    CHECK(r.t_clique == doctest::Approx(hom_density(complete_graph(3).graph(), sampled)).epsilon(1e-12));
}

TEST_CASE("forcing trials") {
    ForcingOptions options;
    SUBCASE("constant start needs no work") {
        const auto record = run_forcing_trial(StepGraphon::constant(0.5, 4), options);
        CHECK(record.iterations == 0);
        CHECK(record.converged);
        CHECK(record.residuals.r1 == 0.0);
        CHECK(record.residuals.r2 == 0.0);
        CHECK(record.distance.l2 == 0.0);
    }
    SUBCASE("perturbed start converges and stays recomputable") {
        const auto record = run_forcing_trial(perturbed_start(options, 3), options);
        CHECK(record.converged);
        CHECK(record.residuals.max_abs() <= options.tol * std::sqrt(2.0));
        const auto again = pair_residuals(record.graphon, options.p, options.t, options.doublings());
        CHECK(again.r1 == doctest::Approx(record.residuals.r1).epsilon(1e-9).scale(1e-9));
        CHECK(again.r2 == doctest::Approx(record.residuals.r2).epsilon(1e-9).scale(1e-9));
    }
    SUBCASE("non-converged trials are kept") {
        options.max_iterations = 1;
        options.tol = 1e-14;
        options.trials = 3;
        const auto result = forcing_experiment(options);
        REQUIRE(result.trials.size() == 3);
        for (const auto& trial : result.trials) {
            CHECK_FALSE(trial.converged);
            CHECK(trial.iterations <= 1);
        }
        CHECK(result.summary.converged == 0);
    }
    SUBCASE("non-uniform weights are rejected") {
        CHECK_THROWS_AS(run_forcing_trial(StepGraphon({0.25, 0.75}, {{0.5, 0.5}, {0.5, 0.5}}), options),
                        InvalidArgument);
    }
}

TEST_CASE("forcing experiment is schedule independent") {
    ForcingOptions options;
    options.trials = 4;
    options.seed = 11;
    const auto serial = forcing_experiment(options);
    options.threads = 3;
    const auto parallel = forcing_experiment(options);
    REQUIRE(serial.trials.size() == parallel.trials.size());
    for (std::size_t i = 0; i < serial.trials.size(); ++i) {
        CHECK(serial.trials[i].seed == 11 + i);
        CHECK(serial.trials[i].graphon.values() == parallel.trials[i].graphon.values());
        CHECK(serial.trials[i].residuals.r2 == parallel.trials[i].residuals.r2);
        const auto again = pair_residuals(serial.trials[i].graphon, 0.5, 3, 2);
        CHECK(std::abs(again.r1 - serial.trials[i].residuals.r1) <= 1e-9);
        CHECK(std::abs(again.r2 - serial.trials[i].residuals.r2) <= 1e-9);
    }
    CHECK(serial.summary.converged == parallel.summary.converged);
    CHECK(serial.summary.max_l2 == parallel.summary.max_l2);
}

TEST_CASE("forcing experiment validation") {
    ForcingOptions options;
    options.t = 6;
    CHECK_THROWS_AS(forcing_experiment(options), InvalidArgument);
    options.t = 3;
    options.parts = 9;
    CHECK_THROWS_AS(forcing_experiment(options), InvalidArgument);
    options.parts = 4;
    options.trials = 0;
    CHECK_THROWS_AS(forcing_experiment(options), InvalidArgument);
    options.trials = 1;
    options.p = 0.0;
    CHECK_THROWS_AS(forcing_experiment(options), InvalidArgument);
    CHECK(ForcingOptions{}.doublings() == 2);
    CHECK(default_doubling_count(4) == 3);
    CHECK(default_doubling_count(5) == 3);
    CHECK(default_doubling_count(2) == 2);
}

TEST_CASE("pareto frontier") {
    auto point = [](double residual, double l2) {
        ParetoPoint p;
        p.residual = residual;
        p.l2 = l2;
        return p;
    };
    const auto frontier = pareto_frontier({point(1e-3, 0.3), point(1e-6, 0.1), point(1e-4, 0.05), point(1e-9, 0.01),
                                           point(1e-6, 0.2), point(1e-2, 0.25)});
    REQUIRE(frontier.size() == 3);
    CHECK(frontier[0].residual == 1e-9);
    CHECK(frontier[1].l2 == 0.2);
    CHECK(frontier[2].l2 == 0.3);
    CHECK(*distance_at_residual(frontier, 1e-8) == 0.01);
    CHECK(*distance_at_residual(frontier, 1e-5) == 0.2);
    CHECK_FALSE(distance_at_residual(frontier, 1e-10).has_value());
}

TEST_CASE("adversarial search finds near-feasible points") {
    ForcingOptions options;
    options.trials = 1;
    options.adversarial = true;
    options.adversarial_starts = 1;
    options.seed = 2;
    const auto result = forcing_experiment(options);
    REQUIRE(result.adversarial.size() == options.lambdas.size());
    for (std::size_t i = 0; i < result.adversarial.size(); ++i) {
        const auto& point = result.adversarial[i];
        CHECK(point.lambda == options.lambdas[i]);
        CHECK(point.residual == pair_residuals(point.graphon, 0.5, 3, 2).max_abs());
        CHECK(point.l2 == graphon_constancy(point.graphon, 0.5).l2);
    }
    for (std::size_t i = 1; i < result.frontier.size(); ++i) {
        CHECK(result.frontier[i].residual >= result.frontier[i - 1].residual);
        CHECK(result.frontier[i].l2 > result.frontier[i - 1].l2);
    }
}

TEST_CASE("contrast witness") {
    const auto c = contrast_witness();
    // Independent root: Newton on the cubic from the midpoint.
    long double b = 0.6L;
    for (int i = 0; i < 60; ++i) {
        const long double a = 2 - 2 * b;
        const long double f = a * a * a + 3 * a * b * b - 1;
        const long double df = -6 * a * a + 3 * (-2) * b * b + 6 * a * b;
        b -= f / df;
    }
    CHECK(c.b == doctest::Approx(static_cast<double>(b)).epsilon(1e-14));
    CHECK(c.b == doctest::Approx(0.7380224240549752).epsilon(1e-14));
    CHECK(c.a == doctest::Approx(2 - 2 * c.b).epsilon(1e-15));
    CHECK(std::abs(c.edge_density - 0.5) <= 1e-10);
    CHECK(std::abs(c.triangle_density - 0.125) <= 1e-10);
    CHECK(std::abs(oracle::graphon_density(complete_graph(3).graph(), c.graphon) - 0.125) <= 1e-10);
    CHECK(c.distance.linf > 0.1);
    CHECK(c.distance.linf == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("delta probe") {
    ProbeOptions options;
    options.deltas = {0.0, 0.01, 1.0};
    options.starts = 1;
    options.base.lambdas = {1e0, 1e4, 1e8};
    options.base.max_iterations = 2000;
    const auto rows = delta_epsilon_probe(options);
    REQUIRE(rows.size() == 3);
    // Residual 1e-10 still admits deviations of order (512e-10)^(1/4).
    CHECK(rows[0].max_l2 >= 0.0);
    CHECK(rows[0].max_l2 < 0.03);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].max_l2 >= rows[i - 1].max_l2);
    CHECK(rows[2].max_l2 >= contrast_witness().distance.l2);
    for (const auto& row : rows) {
        const auto again = pair_residuals(row.witness, 0.5, 3, 2);
        CHECK(again.r1 == row.residuals.r1);
        CHECK(std::abs(again.r1) <= row.delta * 0.125 + options.feasibility_tolerance);
        CHECK(std::abs(again.r2) <= row.delta * std::pow(0.5, 12) + options.feasibility_tolerance);
    }
    options.deltas = {-1.0};
    CHECK_THROWS_AS(delta_epsilon_probe(options), InvalidArgument);
}
