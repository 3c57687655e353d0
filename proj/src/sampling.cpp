#include "forcing/sampling.hpp"

#include "forcing/errors.hpp"

namespace forcing {

std::uint64_t mix_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("rng: bound must be positive");
    // Rejection keeps the result exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
}

Graph gnp(int n, double p, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("gnp: n must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("gnp: p must lie in [0, 1]");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform() < p) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

Graph w_random(const StepGraphon& w, int n, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("w_random: n must be at least 1");
    Rng rng(seed);
    const int m = w.parts();
    std::vector<int> part(n);
    for (int v = 0; v < n; ++v) {
        const double u = rng.uniform();
        double cumulative = 0.0;
        int chosen = m - 1;
        for (int i = 0; i < m; ++i) {
            cumulative += w.weight(i);
            if (u < cumulative) {
                chosen = i;
                break;
            }
        }
        part[v] = chosen;
    }
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform() < w.value(part[u], part[v])) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

Graph sample(const SampleSpec& spec) {
    if (const double* p = std::get_if<double>(&spec.source)) return gnp(spec.n, *p, spec.seed);
    return w_random(std::get<StepGraphon>(spec.source), spec.n, spec.seed);
}

}  // namespace forcing
