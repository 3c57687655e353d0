#pragma once

#include <vector>

#include "forcing/graph.hpp"

namespace forcing {

/// Step-function graphon: [0,1] is cut into parts of mass weights[i], and W
/// is constant values[i][j] on each rectangle.
///
/// Invariants, checked on construction: at least one part, weights strictly
/// positive and summing to 1 within 1e-12, values square, symmetric and in
/// [0, 1].
class StepGraphon {
public:
    static constexpr double kWeightTolerance = 1e-12;

    StepGraphon(std::vector<double> weights, std::vector<std::vector<double>> values);

    /// W ≡ p on `parts` equal parts.
    static StepGraphon constant(double p, int parts = 1);
    /// Equal weights 1/m.
    static StepGraphon uniform(std::vector<std::vector<double>> values);
    /// The step graphon of a finite graph: n parts of mass 1/n, 0/1 entries.
    static StepGraphon of_graph(const Graph& g);

    int parts() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<std::vector<double>>& values() const { return values_; }
    double weight(int i) const { return weights_[i]; }
    double value(int i, int j) const { return values_[i][j]; }

    /// Splits part `index` into two halves with identical rows and columns.
    StepGraphon split_part(int index) const;
    /// Reorders parts: new part perm[i] is old part i.
    StepGraphon permute(const std::vector<int>& perm) const;

    friend bool operator==(const StepGraphon&, const StepGraphon&) = default;

private:
    std::vector<double> weights_;
    std::vector<std::vector<double>> values_;
};

/// Number of free parameters of a symmetric m x m value matrix.
inline int symmetric_parameter_count(int m) { return m * (m + 1) / 2; }
/// Index of the symmetric entry {i, j} in the packed upper triangle.
int symmetric_index(int m, int i, int j);

}  // namespace forcing
