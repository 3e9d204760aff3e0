#pragma once

// Statistical picture: pushing C(.; nu, gamma) through F_a yields another
// Cauchy density, so the Perron-Frobenius step collapses to a map on the
// upper half-plane
//
//     nu'    = a nu    (A - 1) / A
//     gamma' = a gamma (A + 1) / A,        A = nu^2 + gamma^2.
//
// In s = nu - i gamma this is s' = F_a(s); in i s = gamma + i nu it is G_a.

#include "boolemap/errors.hpp"
#include "boolemap/numerics.hpp"
#include "boolemap/orbital.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

namespace boolemap {

/// Point of the closed upper half-plane. Interior points have gamma > 0; a
/// boundary point (gamma = 0) stands for the Dirac mass at nu.
class HPoint {
public:
    [[nodiscard]] static HPoint interior(double nu, double gamma) {
        if (!std::isfinite(nu) || !std::isfinite(gamma)) throw invalid_parameter("HPoint coordinates must be finite");
        if (!(gamma > 0.0)) {
            std::ostringstream os;
            os << "interior HPoint requires gamma > 0, got " << gamma;
            throw invalid_parameter(os.str());
        }
        return HPoint(nu, gamma, false);
    }

    [[nodiscard]] static HPoint boundary(double nu) {
        if (!std::isfinite(nu)) throw invalid_parameter("HPoint coordinates must be finite");
        return HPoint(nu, 0.0, true);
    }

    [[nodiscard]] double nu() const noexcept { return nu_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] bool on_boundary() const noexcept { return boundary_; }
    [[nodiscard]] Vec2 coords() const noexcept { return {nu_, gamma_}; }
    [[nodiscard]] CauchyParams cauchy() const { return CauchyParams::make(nu_, gamma_); }

    friend bool operator==(const HPoint&, const HPoint&) = default;

private:
    HPoint(double nu, double gamma, bool boundary) : nu_(nu), gamma_(gamma), boundary_(boundary) {}

    double nu_;
    double gamma_;
    bool boundary_;
};

struct TangentVector {
    HPoint base;
    double d_nu = 0.0;
    double d_gamma = 0.0;
};

/// (q, p) = (nu, 1 / (2 gamma)).
struct CanonicalPoint {
    double q = 0.0;
    double p = 0.5;

    [[nodiscard]] static CanonicalPoint make(double q, double p) {
        if (!std::isfinite(q) || !std::isfinite(p)) throw invalid_parameter("canonical coordinates must be finite");
        if (!(p > 0.0)) throw invalid_parameter("canonical momentum p must be positive");
        return {q, p};
    }
};

using Jacobian2 = Mat2;

namespace detail {

// Closed-form components without domain checks. Shared by parameter_step and
// orbital_from_parameter, which differ only in the domain they accept.
[[nodiscard]] inline Vec2 parameter_components(double alpha, double nu, double gamma) {
    const double area = nu * nu + gamma * gamma;
    if (!(area > 0.0)) throw degenerate_input("parameter map is undefined at nu^2 + gamma^2 = 0");
    return {alpha * nu * (area - 1.0) / area, alpha * gamma * (area + 1.0) / area};
}

} // namespace detail

[[nodiscard]] inline HPoint parameter_step(Alpha alpha, const HPoint& x) {
    if (x.on_boundary()) return HPoint::boundary(boole_transform(alpha, x.nu()));
    const Vec2 next = detail::parameter_components(alpha.value(), x.nu(), x.gamma());
    return HPoint::interior(next[0], next[1]);
}

/// Iterates the parameter map; result[0] == x0, result.size() == steps + 1.
[[nodiscard]] inline std::vector<HPoint> parameter_trajectory(Alpha alpha, const HPoint& x0, std::size_t steps) {
    std::vector<HPoint> out;
    out.reserve(steps + 1);
    out.push_back(x0);
    for (std::size_t k = 0; k < steps; ++k) out.push_back(parameter_step(alpha, out.back()));
    return out;
}

/// The unique fixed point (0, sqrt(a / (1 - a))).
[[nodiscard]] inline HPoint fixed_point(Alpha alpha) { return HPoint::interior(0.0, invariant_scale(alpha)); }

/// Partials of (nu', gamma') with respect to (nu, gamma).
[[nodiscard]] inline Jacobian2 jacobian_analytic(Alpha alpha, const HPoint& x) {
    if (x.on_boundary()) throw invalid_parameter("jacobian_analytic requires an interior point");
    const double a = alpha.value();
    const double nu = x.nu();
    const double g = x.gamma();
    const double area = nu * nu + g * g;
    const double area2 = area * area;
    const double mixed = 2.0 * a * nu * g / area2;
    Jacobian2 jac;
    jac(0, 0) = a * (1.0 - (g * g - nu * nu) / area2);
    jac(0, 1) = mixed;
    jac(1, 0) = -mixed;
    jac(1, 1) = a * (1.0 + (nu * nu - g * g) / area2);
    return jac;
}

struct StabilityReport {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    bool linearly_stable = false;       ///< |lambda| < 1 and the linearization is non-degenerate
    bool quadratic_convergence = false; ///< a == 1/2: Jacobian vanishes at the fixed point
};

/// Both eigenvalues of the linearization at the fixed point equal 2a - 1.
[[nodiscard]] inline StabilityReport stability_eigenvalues(Alpha alpha) noexcept {
    const double lambda = 2.0 * alpha.value() - 1.0;
    StabilityReport r;
    r.lambda1 = lambda;
    r.lambda2 = lambda;
    r.quadratic_convergence = alpha.value() == 0.5;
    r.linearly_stable = std::fabs(lambda) < 1.0 && !r.quadratic_convergence;
    return r;
}

/// (nu, gamma) -> (-nu, gamma); commutes with parameter_step.
[[nodiscard]] inline HPoint reflect(const HPoint& x) {
    return x.on_boundary() ? HPoint::boundary(-x.nu()) : HPoint::interior(-x.nu(), x.gamma());
}

struct ComplexPair {
    std::complex<double> first;
    std::complex<double> second;
};

/// (F_a(nu - i gamma), F_a(nu + i gamma)) in complex arithmetic. The first entry
/// equals nu' - i gamma', the second its conjugate.
[[nodiscard]] inline ComplexPair complex_s_step(Alpha alpha, const HPoint& x) {
    if (x.on_boundary()) throw invalid_parameter("complex_s_step requires an interior point");
    const std::complex<double> s{x.nu(), -x.gamma()};
    const std::complex<double> w{x.nu(), x.gamma()};
    return {boole_map(alpha.value(), s), boole_map(alpha.value(), w)};
}

/// (G_a(gamma + i nu), G_a(-gamma + i nu)). The first entry equals gamma' + i nu'.
[[nodiscard]] inline ComplexPair complex_check_step(Alpha alpha, const HPoint& x) {
    if (x.on_boundary()) throw invalid_parameter("complex_check_step requires an interior point");
    const std::complex<double> s_check{x.gamma(), x.nu()};
    const std::complex<double> w_check{-x.gamma(), x.nu()};
    return {g_map(alpha.value(), s_check), g_map(alpha.value(), w_check)};
}

/// The parameter-map formulas read as a map of the plane: (Re, Im) of F_a(xi1 + i xi2).
[[nodiscard]] inline Vec2 orbital_from_parameter(Alpha alpha, double xi1, double xi2) {
    return detail::parameter_components(alpha.value(), xi1, xi2);
}

[[nodiscard]] inline CanonicalPoint to_canonical(const HPoint& x) {
    if (x.on_boundary()) throw invalid_parameter("canonical coordinates are undefined on the boundary");
    return CanonicalPoint::make(x.nu(), 1.0 / (2.0 * x.gamma()));
}

[[nodiscard]] inline HPoint from_canonical(const CanonicalPoint& c) {
    if (!(c.p > 0.0)) throw invalid_parameter("canonical momentum p must be positive");
    return HPoint::interior(c.q, 1.0 / (2.0 * c.p));
}

/// Parameter map written directly in (q, p).
[[nodiscard]] inline CanonicalPoint canonical_step(Alpha alpha, const CanonicalPoint& c) {
    if (!(c.p > 0.0)) throw invalid_parameter("canonical momentum p must be positive");
    const double a = alpha.value();
    const double inv = 1.0 / (2.0 * c.p);
    const double area = inv * inv + c.q * c.q;
    if (!(area > 0.0)) throw degenerate_input("canonical_step is undefined at q = 0, p = inf");
    return CanonicalPoint::make(a * c.q * (area - 1.0) / area, (c.p / a) * area / (area + 1.0));
}

struct ConvergenceReport {
    double fixed_gamma = 0.0;
    double bound = 0.0;                ///< a for a >= 1/2, 1 - a otherwise
    std::vector<double> gammas;        ///< gamma_0 .. gamma_{n_max}
    std::vector<double> deviations;    ///< |gamma_n - fixed_gamma|
    std::vector<double> ratios;        ///< ratios[n] = dev[n+1] / dev[n]; NaN when unresolved
    std::size_t resolved_until = 0;    ///< ratios are meaningful for n < resolved_until
    bool bound_holds = true;           ///< ratio <= bound for every resolved n >= 2
    std::ptrdiff_t first_violation = -1;
    bool superlinear = false;          ///< resolved ratios strictly decrease and end below 1e-3
};

/// Deviation floor below which a contraction ratio is dominated by rounding.
[[nodiscard]] inline double convergence_resolution(double fixed_gamma) noexcept {
    return 1e-12 * std::fmax(1.0, fixed_gamma);
}

/// Iterates G_a from gamma0 (dynamics on the invariant line nu = 0) and tests the
/// contraction estimate |g_{n+1} - g*| <= c |g_n - g*| for n >= 2, with c = a when
/// a >= 1/2 and c = 1 - a when a <= 1/2. Ratios for n < 2 are reported only.
[[nodiscard]] inline ConvergenceReport convergence_bound_check(Alpha alpha, double gamma0, std::size_t n_max) {
    if (!(gamma0 > 0.0)) throw invalid_parameter("convergence_bound_check requires gamma0 > 0");
    if (n_max < 3) throw invalid_parameter("convergence_bound_check requires n_max >= 3");
    ConvergenceReport r;
    const double a = alpha.value();
    r.fixed_gamma = invariant_scale(alpha);
    r.bound = a >= 0.5 ? a : 1.0 - a;
    r.gammas.reserve(n_max + 1);
    r.gammas.push_back(gamma0);
    for (std::size_t n = 0; n < n_max; ++n) r.gammas.push_back(g_transform(alpha, r.gammas.back()));
    for (double g : r.gammas) r.deviations.push_back(std::fabs(g - r.fixed_gamma));

    const double floor = convergence_resolution(r.fixed_gamma);
    r.ratios.assign(n_max, std::numeric_limits<double>::quiet_NaN());
    r.resolved_until = 0;
    for (std::size_t n = 0; n < n_max; ++n) {
        if (!(r.deviations[n] > floor)) break;
        r.ratios[n] = r.deviations[n + 1] / r.deviations[n];
        r.resolved_until = n + 1;
    }
    for (std::size_t n = 2; n < r.resolved_until; ++n) {
        if (r.ratios[n] > r.bound) {
            r.bound_holds = false;
            r.first_violation = static_cast<std::ptrdiff_t>(n);
            break;
        }
    }
    if (r.resolved_until >= 2) {
        bool decreasing = true;
        for (std::size_t n = 1; n < r.resolved_until; ++n) decreasing = decreasing && r.ratios[n] < r.ratios[n - 1];
        r.superlinear = decreasing && r.ratios[r.resolved_until - 1] < 1e-3;
    }
    return r;
}

struct AsymptoticErrors {
    double nu_relative = 0.0;    ///< |nu' - a nu| / |a nu|; 0 when nu == 0
    double gamma_relative = 0.0; ///< |gamma' - a gamma| / (a gamma)
    double bound = 0.0;          ///< 1 / (nu^2 + gamma^2)
};

/// Distance of one exact step from the large-(nu, gamma) approximation (nu, gamma) -> a (nu, gamma).
[[nodiscard]] inline AsymptoticErrors asymptotic_check(Alpha alpha, const HPoint& x) {
    if (x.on_boundary()) throw invalid_parameter("asymptotic_check requires an interior point");
    const double a = alpha.value();
    const HPoint next = parameter_step(alpha, x);
    AsymptoticErrors e;
    e.nu_relative = x.nu() == 0.0 ? 0.0 : std::fabs(next.nu() - a * x.nu()) / std::fabs(a * x.nu());
    e.gamma_relative = std::fabs(next.gamma() - a * x.gamma()) / (a * x.gamma());
    e.bound = 1.0 / (x.nu() * x.nu() + x.gamma() * x.gamma());
    return e;
}

struct FixedPointSearch {
    bool converged = false;
    std::size_t iterations = 0;
    HPoint last = HPoint::interior(0.0, 1.0);
    double distance = 0.0; ///< Euclidean distance to the fixed point at exit
};

/// Iteration budget: 60 for a = 1/2 (superattracting), 500 in the bulk, up to 5000
/// near the ends of (0, 1) where |2a - 1| approaches 1.
[[nodiscard]] inline std::size_t default_fixed_point_budget(Alpha alpha) noexcept {
    if (alpha.value() == 0.5) return 60;
    const double rate = std::fabs(2.0 * alpha.value() - 1.0);
    return rate > 0.9 ? 5000 : 500;
}

[[nodiscard]] inline FixedPointSearch iterate_to_fixed_point(Alpha alpha, const HPoint& x0, double tolerance,
                                                             std::size_t max_iterations) {
    const HPoint target = fixed_point(alpha);
    FixedPointSearch out;
    out.last = x0;
    auto dist = [&](const HPoint& x) { return std::hypot(x.nu() - target.nu(), x.gamma() - target.gamma()); };
    out.distance = dist(x0);
    while (out.distance >= tolerance && out.iterations < max_iterations) {
        out.last = parameter_step(alpha, out.last);
        out.distance = dist(out.last);
        ++out.iterations;
    }
    out.converged = out.distance < tolerance;
    return out;
}

/// Geodesic distance of the Fisher metric (dnu^2 + dgamma^2) / (2 gamma^2), i.e. the
/// hyperbolic distance scaled by 1/sqrt(2).
[[nodiscard]] inline double fisher_distance(const HPoint& x, const HPoint& y) {
    if (x.on_boundary() || y.on_boundary()) throw invalid_parameter("fisher_distance requires interior points");
    const double dn = x.nu() - y.nu();
    const double dg = x.gamma() - y.gamma();
    const double arg = 1.0 + (dn * dn + dg * dg) / (2.0 * x.gamma() * y.gamma());
    return std::acosh(arg) / std::numbers::sqrt2;
}

} // namespace boolemap
