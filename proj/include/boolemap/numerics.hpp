#pragma once

#include "boolemap/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <concepts>
#include <sstream>

namespace boolemap {

using Vec2 = std::array<double, 2>;

/// Row-major 2x2 matrix; row = output component, column = input component.
struct Mat2 {
    std::array<std::array<double, 2>, 2> m{};

    [[nodiscard]] double operator()(int i, int j) const noexcept { return m[i][j]; }
    [[nodiscard]] double& operator()(int i, int j) noexcept { return m[i][j]; }
    [[nodiscard]] double det() const noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

    [[nodiscard]] double max_abs_diff(const Mat2& other) const noexcept {
        double worst = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) worst = std::fmax(worst, std::fabs(m[i][j] - other.m[i][j]));
        return worst;
    }
};

template <class F>
concept PlaneMap = requires(const F& f, Vec2 x) {
    { f(x) } -> std::convertible_to<Vec2>;
};

template <class F>
concept PlaneScalar = requires(const F& f, Vec2 x) {
    { f(x) } -> std::convertible_to<double>;
};

/// Central-difference Jacobian, J(i, j) = d f_i / d x_j.
template <PlaneMap F>
[[nodiscard]] Mat2 central_difference_jacobian(const F& f, Vec2 x, double h) {
    Mat2 jac;
    for (int j = 0; j < 2; ++j) {
        Vec2 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const Vec2 fp = f(xp);
        const Vec2 fm = f(xm);
        for (int i = 0; i < 2; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return jac;
}

template <PlaneScalar F>
[[nodiscard]] Vec2 central_difference_gradient(const F& f, Vec2 x, double h) {
    Vec2 grad{};
    for (int j = 0; j < 2; ++j) {
        Vec2 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        grad[j] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return grad;
}

struct QuadratureOptions {
    double tolerance = 1e-13;   ///< relative tolerance handed to the adaptive scheme
    double max_error = 1e-10;   ///< absolute error estimate above which the result is rejected
    unsigned max_depth = 15;
};

/// Adaptive 61-point Gauss-Kronrod on a finite interval. Throws quadrature_failure when
/// the final error estimate exceeds options.max_error.
template <class F>
[[nodiscard]] double integrate_adaptive(const F& f, double a, double b, const QuadratureOptions& options = {}) {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, a, b, options.max_depth, options.tolerance, &error);
    if (!std::isfinite(value) || !(error <= options.max_error)) {
        std::ostringstream os;
        os << "adaptive quadrature did not converge: estimate " << value << ", error " << error;
        throw quadrature_failure(os.str());
    }
    return value;
}

} // namespace boolemap
