#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace forcing {

/// Value of the objective; writes the gradient into `gradient` (same size as x).
using SmoothObjective = std::function<double(const std::vector<double>& x, std::vector<double>& gradient)>;

/// Symmetric scaling matrix at x (typically a Hessian), n x n row-major. Its
/// eigenvalues are replaced by their absolute values, floored relative to the largest.
using Preconditioner = std::function<std::vector<double>(const std::vector<double>& x)>;

struct ProjectedGradientOptions {
    int max_iterations = 10000;
    double lower = 0.0;
    double upper = 1.0;
    /// Stop as soon as the objective is at or below this value.
    double target = -std::numeric_limits<double>::infinity();
    double armijo = 1e-4;
    double min_step = 1e-30;
    /// Stop once an accepted step moves no coordinate by more than this.
    double step_tolerance = 0.0;
    /// Stop after `stall_iterations` consecutive accepted steps whose relative
    /// decrease is at most this (0 disables).
    double stall_tolerance = 0.0;
    int stall_iterations = 20;
    /// When set, free coordinates move along -H^{-1} g (unit trial step);
    /// coordinates held at a bound by their gradient move along -g.
    Preconditioner preconditioner;
};

struct ProjectedGradientResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool reached_target = false;
    bool stationary = false;  ///< projected step vanished or line search failed
};

/// Projected gradient descent on a box with Armijo backtracking along the
/// projection arc. Trial steps start from the Barzilai-Borwein length, or
/// from 1 for scaled steps; a failed scaled search falls back to the plain
/// gradient.
ProjectedGradientResult projected_gradient(const SmoothObjective& objective, std::vector<double> x0,
                                           const ProjectedGradientOptions& options);

}  // namespace forcing
