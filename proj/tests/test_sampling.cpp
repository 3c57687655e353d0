#include "doctest.h"

#include <cmath>

#include "forcing/density.hpp"
#include "forcing/errors.hpp"
#include "forcing/sampling.hpp"
#include "oracles.hpp"

using namespace forcing;

namespace {

double edge_fraction(const Graph& g) {
    const double n = g.vertex_count();
    return static_cast<double>(g.edge_count()) / (n * (n - 1) / 2);
}

}  // namespace

TEST_CASE("gnp extremes and validation") {
    CHECK(gnp(20, 0.0, 1).edge_count() == 0);
    CHECK(gnp(20, 1.0, 1) == complete_graph(20).graph());
    CHECK(gnp(1, 0.5, 1).vertex_count() == 1);
    CHECK_THROWS_AS(gnp(10, 1.5, 1), InvalidArgument);
    CHECK_THROWS_AS(gnp(10, -0.1, 1), InvalidArgument);
    CHECK_THROWS_AS(gnp(0, 0.5, 1), InvalidArgument);
}

TEST_CASE("gnp edge density concentrates") {
    CHECK(std::abs(edge_fraction(gnp(1000, 0.5, 2024)) - 0.5) <= 0.01);

    const int n = 200;
    const double p = 0.3, pairs = n * (n - 1) / 2.0;
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) mean += edge_fraction(gnp(n, p, seed)) / 20;
    const double band = 4 * 3 * std::sqrt(p * (1 - p) / pairs) / std::sqrt(20.0);
    CHECK(std::abs(mean - p) <= band);
}

TEST_CASE("sampling is seed-deterministic") {
    const auto w = StepGraphon({0.2, 0.8}, {{0.9, 0.1}, {0.1, 0.4}});
    CHECK(gnp(50, 0.4, 99) == gnp(50, 0.4, 99));
    CHECK(w_random(w, 50, 99) == w_random(w, 50, 99));
    CHECK_FALSE(gnp(50, 0.4, 99) == gnp(50, 0.4, 100));
    CHECK(sample({50, 0.4, 99}) == gnp(50, 0.4, 99));
    CHECK(sample({50, w, 99}) == w_random(w, 50, 99));
}

TEST_CASE("generator stream is pinned") {
    // mt19937_64 is fully specified by the standard, so these values are
    // the same on every conforming platform.
    Rng rng(0);
    const std::uint64_t first = rng.next();
    std::mt19937_64 reference(mix_seed(0));
    CHECK(first == reference());
    CHECK(mix_seed(0) == 0xe220a8397b1dcdafULL);
    Rng a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.uniform() == b.uniform());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(a.below(7) < 7);
    }
}

TEST_CASE("bipartite graphon samples are nearly triangle free") {
    const auto w = StepGraphon({0.5, 0.5}, {{0, 1}, {1, 0}});
    const Graph g = w_random(w, 300, 3);
    CHECK(hom_density(complete_graph(3).graph(), g) < 0.01);
    CHECK(hom_density(complete_graph(3).graph(), g) == 0.0);
}

TEST_CASE("triangle density of W-random graphs converges") {
    // Part sizes fluctuate by about n^(-1/2), so an individual graphon can
    // miss the band on a majority of seeds; require it for most graphons.
    std::mt19937_64 rng(77);
    int graphons_ok = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto w = oracle::random_graphon(rng, 3);
        const double expected = graphon_density(complete_graph(3).graph(), w);
        int close = 0;
        for (std::uint64_t seed = 0; seed < 3; ++seed)
            close += std::abs(hom_density(complete_graph(3).graph(), w_random(w, 300, seed)) - expected) <= 0.02;
        graphons_ok += close >= 2;
    }
    CHECK(graphons_ok >= 8);
}

TEST_CASE("one-part graphon matches G(n, p) in distribution") {
    // Edge counts over 50 seeds standardized by the binomial variance; the
    // chi-squared statistic with 50 degrees of freedom must stay below the
    // 1e-4 upper quantile (about 95.97).
    const int n = 60;
    const double p = 0.35, pairs = n * (n - 1) / 2.0;
    const double mean = pairs * p, var = pairs * p * (1 - p);
    double chi_w = 0.0, chi_g = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const double ew = static_cast<double>(w_random(StepGraphon::constant(p), n, seed + 1000).edge_count());
        const double eg = static_cast<double>(gnp(n, p, seed).edge_count());
        chi_w += (ew - mean) * (ew - mean) / var;
        chi_g += (eg - mean) * (eg - mean) / var;
    }
    CHECK(chi_w < 95.97);
    CHECK(chi_g < 95.97);
}
