#include "forcing/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace forcing {

namespace {

// -H_FF^{-1} g_F on free coordinates, -g on coordinates pinned at a bound.
// Empty when the decomposition fails.
std::vector<double> scaled_direction(const std::vector<double>& h, const std::vector<double>& x,
                                     const std::vector<double>& grad, const ProjectedGradientOptions& options) {
    const int n = static_cast<int>(x.size());
    std::vector<int> free;
    std::vector<double> direction(n);
    for (int i = 0; i < n; ++i) {
        const bool pinned = (x[i] <= options.lower && grad[i] > 0.0) || (x[i] >= options.upper && grad[i] < 0.0);
        if (pinned)
            direction[i] = -grad[i];
        else
            free.push_back(i);
    }
    const int f = static_cast<int>(free.size());
    if (f == 0) return direction;
    Eigen::MatrixXd hf(f, f);
    Eigen::VectorXd gf(f);
    for (int a = 0; a < f; ++a) {
        gf[a] = grad[free[a]];
        for (int b = 0; b < f; ++b) hf(a, b) = h[static_cast<std::size_t>(free[a]) * n + free[b]];
    }
    // Negative curvature is flipped and tiny curvature floored, so the scaled
    // step is always a descent direction.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hf);
    if (eig.info() != Eigen::Success) return {};
    Eigen::VectorXd values = eig.eigenvalues().cwiseAbs();
    const double floor = std::max(values.maxCoeff() * 1e-12, std::numeric_limits<double>::min());
    values = values.cwiseMax(floor);
    const Eigen::VectorXd d =
        -(eig.eigenvectors() * (eig.eigenvectors().transpose() * gf).cwiseQuotient(values));
    for (int a = 0; a < f; ++a) {
        if (!std::isfinite(d[a])) return {};
        direction[free[a]] = d[a];
    }
    return direction;
}

}  // namespace

ProjectedGradientResult projected_gradient(const SmoothObjective& objective, std::vector<double> x0,
                                           const ProjectedGradientOptions& options) {
    const std::size_t n = x0.size();
    auto clamp = [&](double v) { return std::clamp(v, options.lower, options.upper); };
    for (double& v : x0) v = clamp(v);

    ProjectedGradientResult out;
    std::vector<double> grad(n), next(n), next_grad(n);
    double value = objective(x0, grad);
    out.x = std::move(x0);

    double step = 0.0;
    {
        double norm = 0.0;
        for (double g : grad) norm = std::max(norm, std::abs(g));
        step = norm > 0.0 ? 1.0 / norm : 1.0;
    }

    // Armijo search along the projection arc x(s) = P(x + s d).
    auto search = [&](const std::vector<double>& direction, double trial, double& next_value) {
        while (trial >= options.min_step) {
            double descent = 0.0, moved = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = clamp(out.x[i] + trial * direction[i]);
                descent += grad[i] * (next[i] - out.x[i]);
                moved = std::max(moved, std::abs(next[i] - out.x[i]));
            }
            if (moved == 0.0 || descent >= 0.0) return false;
            next_value = objective(next, next_grad);
            if (next_value <= value + options.armijo * descent) return true;
            trial *= 0.5;
        }
        return false;
    };

    int it = 0, stalled = 0;
    for (; it < options.max_iterations; ++it) {
        if (value <= options.target) {
            out.reached_target = true;
            break;
        }
        double next_value = value;
        bool accepted = false, scaled = false;
        if (options.preconditioner) {
            const auto direction = scaled_direction(options.preconditioner(out.x), out.x, grad, options);
            if (!direction.empty()) scaled = accepted = search(direction, 1.0, next_value);
        }
        if (!accepted) {
            std::vector<double> steepest(n);
            for (std::size_t i = 0; i < n; ++i) steepest[i] = -grad[i];
            accepted = search(steepest, step, next_value);
        }
        if (!accepted) {
            out.stationary = true;
            break;
        }
        double ss = 0.0, sy = 0.0, moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = next[i] - out.x[i];
            const double y = next_grad[i] - grad[i];
            ss += s * s;
            sy += s * y;
            moved = std::max(moved, std::abs(s));
        }
        if (!scaled) step = sy > 0.0 ? ss / sy : step * 2.0;
        const double decrease = value - next_value;
        std::swap(out.x, next);
        std::swap(grad, next_grad);
        value = next_value;
        stalled = decrease <= options.stall_tolerance * std::max(1.0, std::abs(value)) ? stalled + 1 : 0;
        if (moved <= options.step_tolerance || (options.stall_tolerance > 0.0 && stalled >= options.stall_iterations)) {
            out.stationary = true;
            ++it;
            break;
        }
    }
    if (value <= options.target) out.reached_target = true;
    out.value = value;
    out.iterations = it;
    return out;
}

}  // namespace forcing
