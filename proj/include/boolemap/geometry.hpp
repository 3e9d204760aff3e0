#pragma once

// Geometry of the Cauchy parameter plane: Fisher metric g = (dnu^2 + dgamma^2) / (2 gamma^2),
// the complex structure J = dgamma (x) d/dnu - dnu (x) d/dgamma, the Kahler form
// omega(X, Y) = g(JX, Y) = -dnu ^ dgamma / (2 gamma^2), and the Killing fields of g.
// Each closed form has a numerical counterpart built from its definition.

#include "boolemap/errors.hpp"
#include "boolemap/numerics.hpp"
#include "boolemap/orbital.hpp"
#include "boolemap/parameter_map.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace boolemap {

/// Symmetric 2x2 tensor in (nu, gamma) components.
struct Metric2 {
    double g_nn = 0.0;
    double g_ng = 0.0;
    double g_gg = 0.0;

    [[nodiscard]] double operator()(int a, int b) const noexcept {
        if (a == 0 && b == 0) return g_nn;
        if (a == 1 && b == 1) return g_gg;
        return g_ng;
    }

    [[nodiscard]] double apply(Vec2 x, Vec2 y) const noexcept {
        return g_nn * x[0] * y[0] + g_ng * (x[0] * y[1] + x[1] * y[0]) + g_gg * x[1] * y[1];
    }

    [[nodiscard]] Metric2 scaled(double s) const noexcept { return {s * g_nn, s * g_ng, s * g_gg}; }

    [[nodiscard]] double max_abs_diff(const Metric2& o) const noexcept {
        return std::fmax(std::fabs(g_nn - o.g_nn), std::fmax(std::fabs(g_ng - o.g_ng), std::fabs(g_gg - o.g_gg)));
    }

    [[nodiscard]] double max_abs() const noexcept {
        return std::fmax(std::fabs(g_nn), std::fmax(std::fabs(g_ng), std::fabs(g_gg)));
    }
};

/// Constant almost complex structure: J(d/dnu) = -d/dgamma, J(d/dgamma) = d/dnu.
struct AlmostComplexJ {
    HPoint base = HPoint::interior(0.0, 1.0);

    [[nodiscard]] static constexpr Vec2 apply(Vec2 x) noexcept { return {x[1], -x[0]}; }
};

/// omega = omega_ng dnu ^ dgamma at a base point.
struct TwoForm {
    double omega_ng = 0.0;

    [[nodiscard]] double operator()(Vec2 x, Vec2 y) const noexcept { return omega_ng * (x[0] * y[1] - x[1] * y[0]); }
};

namespace detail {
inline void require_interior(const HPoint& x, const char* what) {
    if (x.on_boundary()) throw invalid_parameter(std::string(what) + " requires an interior point (gamma > 0)");
}
} // namespace detail

[[nodiscard]] inline Metric2 fisher_metric(const HPoint& x) {
    detail::require_interior(x, "fisher_metric");
    const double v = 1.0 / (2.0 * x.gamma() * x.gamma());
    return {v, 0.0, v};
}

/// Evaluates g_ab = integral of (d_a log p)(d_b log p) p dxi for the Cauchy family by
/// adaptive quadrature after substituting xi = nu + gamma tan(theta).
[[nodiscard]] inline Metric2 fisher_metric_quadrature(const HPoint& x, const QuadratureOptions& options = {}) {
    detail::require_interior(x, "fisher_metric_quadrature");
    const CauchyParams p = x.cauchy();
    auto score = [&](double xi) -> Vec2 {
        const double d = xi - p.nu;
        const double denom = d * d + p.gamma * p.gamma;
        return {2.0 * d / denom, 1.0 / p.gamma - 2.0 * p.gamma / denom};
    };
    auto integrand = [&](int a, int b) {
        return [&, a, b](double theta) {
            const double t = std::tan(theta);
            const double xi = p.nu + p.gamma * t;
            const double dxi_dtheta = p.gamma * (1.0 + t * t);
            const Vec2 s = score(xi);
            return s[a] * s[b] * cauchy_pdf(p, xi) * dxi_dtheta;
        };
    };
    constexpr double half_pi = std::numbers::pi / 2.0;
    Metric2 g;
    g.g_nn = integrate_adaptive(integrand(0, 0), -half_pi, half_pi, options);
    g.g_ng = integrate_adaptive(integrand(0, 1), -half_pi, half_pi, options);
    g.g_gg = integrate_adaptive(integrand(1, 1), -half_pi, half_pi, options);
    return g;
}

/// Pullback ratio of the Fisher metric under the parameter map:
/// 1 - 4 gamma^2 / (1 + A)^2, A = nu^2 + gamma^2. Independent of a; zero only at (0, 1).
[[nodiscard]] inline double conformal_factor(const HPoint& x) {
    detail::require_interior(x, "conformal_factor");
    const double area = x.nu() * x.nu() + x.gamma() * x.gamma();
    const double r = 2.0 * x.gamma() / (1.0 + area);
    return 1.0 - r * r;
}

/// J^T g(F(x)) J for a supplied Jacobian of the parameter map at x.
[[nodiscard]] inline Metric2 pullback(const Metric2& g_image, const Mat2& jac) noexcept {
    Metric2 out;
    auto entry = [&](int a, int b) {
        double s = 0.0;
        for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d) s += jac(c, a) * g_image(c, d) * jac(d, b);
        return s;
    };
    out.g_nn = entry(0, 0);
    out.g_ng = entry(0, 1);
    out.g_gg = entry(1, 1);
    return out;
}

/// Pullback of the Fisher metric through the parameter map using a central-difference Jacobian.
[[nodiscard]] inline Metric2 pullback_fisher_fd(Alpha alpha, const HPoint& x, double h) {
    detail::require_interior(x, "pullback_fisher_fd");
    auto step = [alpha](Vec2 v) { return parameter_step(alpha, HPoint::interior(v[0], v[1])).coords(); };
    const Mat2 jac = central_difference_jacobian(step, x.coords(), h);
    return pullback(fisher_metric(parameter_step(alpha, x)), jac);
}

/// Largest entrywise gap between the finite-difference pullback of g and conformal_factor(x) g(x).
[[nodiscard]] inline double verify_conformal_pullback(Alpha alpha, const HPoint& x, double h = 1e-6) {
    detail::require_interior(x, "verify_conformal_pullback");
    if (!(h > 0.0)) throw invalid_parameter("finite-difference step must be positive");
    if (!(std::hypot(x.nu(), x.gamma() - 1.0) > 10.0 * h))
        throw invalid_parameter("verify_conformal_pullback: point is within 10 h of the degenerate point (0, 1)");
    if (!(x.gamma() > 10.0 * h)) throw invalid_parameter("verify_conformal_pullback: gamma too small for step h");
    const Metric2 expected = fisher_metric(x).scaled(conformal_factor(x));
    return pullback_fisher_fd(alpha, x, h).max_abs_diff(expected);
}

enum class KillingField { k1, k2, k3 };

inline constexpr std::array<KillingField, 3> kAllKillingFields{KillingField::k1, KillingField::k2, KillingField::k3};

[[nodiscard]] constexpr const char* to_string(KillingField k) noexcept {
    switch (k) {
    case KillingField::k1: return "K1";
    case KillingField::k2: return "K2";
    case KillingField::k3: return "K3";
    }
    return "?";
}

/// Components (K^nu, K^gamma) of
///   K1 = (nu^2 - gamma^2) d/dnu + 2 nu gamma d/dgamma,
///   K2 = nu d/dnu + gamma d/dgamma,
///   K3 = d/dnu.
[[nodiscard]] constexpr Vec2 killing_components(KillingField k, Vec2 x) noexcept {
    const double nu = x[0], g = x[1];
    switch (k) {
    case KillingField::k1: return {nu * nu - g * g, 2.0 * nu * g};
    case KillingField::k2: return {nu, g};
    case KillingField::k3: return {1.0, 0.0};
    }
    return {0.0, 0.0};
}

/// d_b K^a as Mat2(a, b).
[[nodiscard]] constexpr Mat2 killing_derivative(KillingField k, Vec2 x) noexcept {
    const double nu = x[0], g = x[1];
    Mat2 d;
    switch (k) {
    case KillingField::k1:
        d(0, 0) = 2.0 * nu;
        d(0, 1) = -2.0 * g;
        d(1, 0) = 2.0 * g;
        d(1, 1) = 2.0 * nu;
        break;
    case KillingField::k2:
        d(0, 0) = 1.0;
        d(1, 1) = 1.0;
        break;
    case KillingField::k3: break;
    }
    return d;
}

[[nodiscard]] inline std::array<TangentVector, 3> killing_fields(const HPoint& x) {
    detail::require_interior(x, "killing_fields");
    std::array<TangentVector, 3> out{TangentVector{x}, TangentVector{x}, TangentVector{x}};
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec2 c = killing_components(kAllKillingFields[i], x.coords());
        out[i].d_nu = c[0];
        out[i].d_gamma = c[1];
    }
    return out;
}

/// (L_K g)_ab = K^c d_c g_ab + g_cb d_a K^c + g_ac d_b K^c, with d_c g_ab by central
/// differences of fisher_metric and the derivatives of K in closed form.
[[nodiscard]] inline Metric2 lie_derivative_metric(KillingField field, const HPoint& x, double h = 1e-6) {
    detail::require_interior(x, "lie_derivative_metric");
    const Vec2 at = x.coords();
    const Vec2 k = killing_components(field, at);
    const Mat2 dk = killing_derivative(field, at);
    const Metric2 g = fisher_metric(x);
    std::array<Metric2, 2> dg;
    for (int c = 0; c < 2; ++c) {
        Vec2 xp = at, xm = at;
        xp[c] += h;
        xm[c] -= h;
        const Metric2 gp = fisher_metric(HPoint::interior(xp[0], xp[1]));
        const Metric2 gm = fisher_metric(HPoint::interior(xm[0], xm[1]));
        dg[c] = {(gp.g_nn - gm.g_nn) / (2 * h), (gp.g_ng - gm.g_ng) / (2 * h), (gp.g_gg - gm.g_gg) / (2 * h)};
    }
    auto entry = [&](int a, int b) {
        double s = 0.0;
        for (int c = 0; c < 2; ++c) s += k[c] * dg[c](a, b) + g(c, b) * dk(c, a) + g(a, c) * dk(c, b);
        return s;
    };
    return {entry(0, 0), entry(0, 1), entry(1, 1)};
}

[[nodiscard]] inline TwoForm symplectic_form(const HPoint& x) {
    detail::require_interior(x, "symplectic_form");
    return {-1.0 / (2.0 * x.gamma() * x.gamma())};
}

/// Coefficient of (L_K omega) on dnu ^ dgamma: K . grad(w) + w div K, with grad(w) by central differences.
[[nodiscard]] inline double lie_derivative_form(KillingField field, const HPoint& x, double h = 1e-6) {
    detail::require_interior(x, "lie_derivative_form");
    const Vec2 at = x.coords();
    auto coeff = [](Vec2 v) { return symplectic_form(HPoint::interior(v[0], v[1])).omega_ng; };
    const Vec2 grad = central_difference_gradient(coeff, at, h);
    const Vec2 k = killing_components(field, at);
    const Mat2 dk = killing_derivative(field, at);
    return k[0] * grad[0] + k[1] * grad[1] + coeff(at) * (dk(0, 0) + dk(1, 1));
}

/// g(JX, Y), evaluated through the metric rather than through omega.
[[nodiscard]] inline double kahler_pairing(const HPoint& x, Vec2 X, Vec2 Y) {
    return fisher_metric(x).apply(AlmostComplexJ::apply(X), Y);
}

/// Max deviation of J o J from -Id on the coordinate basis.
[[nodiscard]] inline double j_squared_check(const HPoint& /*x*/) noexcept {
    double worst = 0.0;
    for (Vec2 e : {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}}) {
        const Vec2 jj = AlmostComplexJ::apply(AlmostComplexJ::apply(e));
        worst = std::fmax(worst, std::fmax(std::fabs(jj[0] + e[0]), std::fabs(jj[1] + e[1])));
    }
    return worst;
}

/// Choice of momentum coordinate paired with q = nu.
enum class MomentumChart {
    reciprocal_scale, ///< p = 1 / (2 gamma), the chart used by CanonicalPoint
    potential,        ///< p = -1 / (2 gamma), an antiderivative of g_0 = 1 / (2 gamma^2) in gamma
};

/// c such that omega = c dp ^ dq in the chart (q, p) = (nu, p(gamma)).
///
/// With omega = w dnu ^ dgamma and dgamma = (dgamma/dp) dp, omega = -w (dgamma/dp) dp ^ dq.
[[nodiscard]] inline double canonical_form_coefficient(const HPoint& x, MomentumChart chart) {
    detail::require_interior(x, "canonical_form_coefficient");
    const double w = symplectic_form(x).omega_ng;
    const double g = x.gamma();
    // dp/dgamma = -1/(2 g^2) for p = 1/(2g); +1/(2 g^2) for p = -1/(2g)
    const double dp_dgamma = chart == MomentumChart::reciprocal_scale ? -1.0 / (2.0 * g * g) : 1.0 / (2.0 * g * g);
    return -w / dp_dgamma;
}

/// |det(D canonical_step) - 1| with a central-difference Jacobian in (q, p).
[[nodiscard]] inline double symplectic_defect(Alpha alpha, const CanonicalPoint& c, double h = 1e-6) {
    if (!(c.p > h)) throw invalid_parameter("symplectic_defect requires p > h");
    auto step = [alpha](Vec2 v) {
        const CanonicalPoint out = canonical_step(alpha, CanonicalPoint::make(v[0], v[1]));
        return Vec2{out.q, out.p};
    };
    return std::fabs(central_difference_jacobian(step, {c.q, c.p}, h).det() - 1.0);
}

/// Levi-Civita coefficients Gamma[c](a, b) = Gamma_ab^c of the Fisher metric, laid out as
/// for a conformally flat metric g_0 (dx^2 + dy^2) with g_0 = 1 / (2 y^2):
/// Gamma_x = d_x g_0 / (2 g_0) = 0 and Gamma_y = -d_y g_0 / (2 g_0) = 1 / y.
struct Christoffel {
    std::array<Mat2, 2> upper; ///< upper[c](a, b)
};

[[nodiscard]] inline Christoffel levi_civita(const HPoint& x) {
    detail::require_interior(x, "levi_civita");
    const double gx = 0.0;
    const double gy = 1.0 / x.gamma();
    Christoffel ch;
    ch.upper[0](0, 0) = gx;
    ch.upper[0](0, 1) = ch.upper[0](1, 0) = -gy;
    ch.upper[0](1, 1) = -gx;
    ch.upper[1](0, 0) = gy;
    ch.upper[1](0, 1) = ch.upper[1](1, 0) = gx;
    ch.upper[1](1, 1) = -gy;
    return ch;
}

/// max |d_c g_ab - Gamma_ca^d g_db - Gamma_cb^d g_ad| with d_c g by central differences.
[[nodiscard]] inline double metric_compatibility_defect(const HPoint& x, double h = 1e-6) {
    const Christoffel ch = levi_civita(x);
    const Metric2 g = fisher_metric(x);
    const Vec2 at = x.coords();
    double worst = 0.0;
    for (int c = 0; c < 2; ++c) {
        Vec2 xp = at, xm = at;
        xp[c] += h;
        xm[c] -= h;
        const Metric2 gp = fisher_metric(HPoint::interior(xp[0], xp[1]));
        const Metric2 gm = fisher_metric(HPoint::interior(xm[0], xm[1]));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double dg = (gp(a, b) - gm(a, b)) / (2.0 * h);
                double conn = 0.0;
                for (int d = 0; d < 2; ++d) conn += ch.upper[d](c, a) * g(d, b) + ch.upper[d](c, b) * g(a, d);
                worst = std::fmax(worst, std::fabs(dg - conn));
            }
    }
    return worst;
}

} // namespace boolemap
