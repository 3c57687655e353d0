#pragma once

#include <array>
#include <cmath>

#include "forcing/graphon.hpp"

namespace forcing::detail {

/// Forward-mode dual number carrying the gradient with respect to the
/// packed symmetric entries of an m x m value matrix, m <= 8.
struct Jet {
    static constexpr int kCapacity = 36;

    double value = 0.0;
    std::array<double, kCapacity> grad{};
    int size = 0;

    Jet() = default;
    Jet(double v, int n) : value(v), size(n) {}

    static Jet variable(double v, int n, int index) {
        Jet j(v, n);
        j.grad[index] = 1.0;
        return j;
    }

    Jet& operator+=(const Jet& o) {
        value += o.value;
        for (int i = 0; i < size; ++i) grad[i] += o.grad[i];
        return *this;
    }

    Jet& operator*=(double s) {
        value *= s;
        for (int i = 0; i < size; ++i) grad[i] *= s;
        return *this;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.value * b.value, a.size);
        for (int i = 0; i < a.size; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
        return r;
    }

    friend Jet operator*(Jet a, double s) { return a *= s; }
};

}  // namespace forcing::detail
