#include "forcing/graphon.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "forcing/errors.hpp"

namespace forcing {

StepGraphon::StepGraphon(std::vector<double> weights, std::vector<std::vector<double>> values)
    : weights_(std::move(weights)), values_(std::move(values)) {
    const std::size_t m = weights_.size();
    if (m == 0) throw InvalidArgument("graphon: at least one part is required");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("graphon: weights must be strictly positive");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightTolerance) throw InvalidArgument("graphon: weights must sum to 1");
    if (values_.size() != m) throw InvalidArgument("graphon: values must be an m x m matrix");
    for (const auto& row : values_)
        if (row.size() != m) throw InvalidArgument("graphon: values must be an m x m matrix");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double v = values_[i][j];
            if (!(v >= 0.0 && v <= 1.0))
                throw InvalidArgument("graphon: value at (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") outside [0, 1]");
            if (v != values_[j][i]) throw InvalidArgument("graphon: values must be symmetric");
        }
}

StepGraphon StepGraphon::constant(double p, int parts) {
    if (parts < 1) throw InvalidArgument("graphon: at least one part is required");
    return uniform(std::vector(parts, std::vector(parts, p)));
}

StepGraphon StepGraphon::uniform(std::vector<std::vector<double>> values) {
    const std::size_t m = values.size();
    return StepGraphon(std::vector(m, 1.0 / static_cast<double>(m)), std::move(values));
}

StepGraphon StepGraphon::of_graph(const Graph& g) {
    const int n = g.vertex_count();
    if (n == 0) throw InvalidArgument("graphon: the empty graph has no step graphon");
    std::vector values(n, std::vector(n, 0.0));
    for (auto [u, v] : g.edges()) values[u][v] = values[v][u] = 1.0;
    return uniform(std::move(values));
}

StepGraphon StepGraphon::split_part(int index) const {
    const int m = parts();
    if (index < 0 || index >= m) throw InvalidArgument("graphon: part index out of range");
    auto source = [&](int i) { return i <= index ? i : i - 1; };
    std::vector<double> weights(m + 1);
    std::vector values(m + 1, std::vector(m + 1, 0.0));
    for (int i = 0; i <= m; ++i) {
        weights[i] = (i == index || i == index + 1) ? weights_[index] / 2 : weights_[source(i)];
        for (int j = 0; j <= m; ++j) values[i][j] = values_[source(i)][source(j)];
    }
    return StepGraphon(std::move(weights), std::move(values));
}

StepGraphon StepGraphon::permute(const std::vector<int>& perm) const {
    const int m = parts();
    if (static_cast<int>(perm.size()) != m) throw InvalidArgument("graphon: permutation size mismatch");
    std::vector<double> weights(m);
    std::vector values(m, std::vector(m, 0.0));
    for (int i = 0; i < m; ++i) {
        weights[perm[i]] = weights_[i];
        for (int j = 0; j < m; ++j) values[perm[i]][perm[j]] = values_[i][j];
    }
    return StepGraphon(std::move(weights), std::move(values));
}

int symmetric_index(int m, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * m - i * (i - 1) / 2 + (j - i);
}

}  // namespace forcing
