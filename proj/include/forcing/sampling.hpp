#pragma once

#include <cstdint>
#include <random>
#include <variant>

#include "forcing/graph.hpp"
#include "forcing/graphon.hpp"

namespace forcing {

/// SplitMix64 finalizer; used to turn consecutive seeds into unrelated
/// generator states.
std::uint64_t mix_seed(std::uint64_t seed);

/// Seeded generator with a portable output stream: std::mt19937_64 (whose
/// sequence is fixed by the standard) seeded with mix_seed(seed), and
/// doubles built from the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct SampleSpec {
    int n = 1;
    std::variant<double, StepGraphon> source = 0.5;
    std::uint64_t seed = 0;
};

/// G(n, p): pairs (u, v), u < v, visited in lexicographic order, each kept
/// when the next uniform draw is below p.
Graph gnp(int n, double p, std::uint64_t seed);

/// W-random graph: parts of vertices 0..n-1 are drawn first (inverse CDF of
/// the weights), then pairs in lexicographic order as in gnp.
Graph w_random(const StepGraphon& w, int n, std::uint64_t seed);

Graph sample(const SampleSpec& spec);

}  // namespace forcing
