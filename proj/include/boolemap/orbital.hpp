#pragma once

// Orbital picture: the generalized Boole transform F_a(x) = a (x - 1/x), its
// companion G_a(g) = a (g + 1/g), branch inverses, orbits, and the Cauchy
// family that F_a leaves invariant.

#include "boolemap/errors.hpp"

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

namespace boolemap {

/// Radius of the ball around 0 treated as the pole of F_a.
inline constexpr double kPoleEpsilon = 1e-300;

/// Map parameter, strictly inside (0, 1).
class Alpha {
public:
    explicit Alpha(double value) : value_(value) {
        if (!(value > 0.0 && value < 1.0)) {
            std::ostringstream os;
            os << "alpha must lie strictly inside (0, 1), got " << value;
            throw invalid_parameter(os.str());
        }
    }

    [[nodiscard]] double value() const noexcept { return value_; }

    friend bool operator==(const Alpha&, const Alpha&) = default;

private:
    double value_;
};

/// A point of the punctured real line on which F_a acts.
class OrbitState {
public:
    explicit OrbitState(double xi, double epsilon = kPoleEpsilon) : xi_(xi) {
        if (!std::isfinite(xi)) throw singular_input("orbit state must be finite");
        if (std::fabs(xi) < epsilon) throw singular_input("orbit state lies on the pole at 0");
    }

    [[nodiscard]] double value() const noexcept { return xi_; }

private:
    double xi_;
};

/// Location/scale of C(x; nu, gamma) = gamma / (pi ((x - nu)^2 + gamma^2)).
struct CauchyParams {
    double nu = 0.0;
    double gamma = 1.0;

    static CauchyParams make(double nu, double gamma) {
        if (!std::isfinite(nu) || !std::isfinite(gamma)) throw invalid_parameter("Cauchy parameters must be finite");
        if (!(gamma > 0.0)) throw invalid_parameter("Cauchy scale must be positive");
        return CauchyParams{nu, gamma};
    }

    friend bool operator==(const CauchyParams&, const CauchyParams&) = default;
};

template <class T>
concept RealOrComplex = std::floating_point<T> || std::same_as<T, std::complex<double>> ||
                        std::same_as<T, std::complex<float>> || std::same_as<T, std::complex<long double>>;

/// a (x - 1/x) with no domain checks; works over the reals and the complex plane.
template <RealOrComplex T>
[[nodiscard]] constexpr T boole_map(double alpha, T x) {
    return static_cast<T>(alpha) * (x - static_cast<T>(1) / x);
}

/// a (x + 1/x) with no domain checks.
template <RealOrComplex T>
[[nodiscard]] constexpr T g_map(double alpha, T x) {
    return static_cast<T>(alpha) * (x + static_cast<T>(1) / x);
}

[[nodiscard]] inline double boole_transform(Alpha alpha, double xi, double epsilon = kPoleEpsilon) {
    if (!(std::fabs(xi) >= epsilon)) {
        std::ostringstream os;
        os << "boole_transform: |xi| = " << std::fabs(xi) << " is inside the pole guard " << epsilon;
        throw singular_input(os.str());
    }
    return boole_map(alpha.value(), xi);
}

[[nodiscard]] inline OrbitState boole_transform(Alpha alpha, OrbitState xi, double epsilon = kPoleEpsilon) {
    return OrbitState(boole_transform(alpha, xi.value(), epsilon), epsilon);
}

[[nodiscard]] inline double g_transform(Alpha alpha, double gamma) {
    if (!(gamma > 0.0)) throw singular_input("g_transform requires gamma > 0");
    return g_map(alpha.value(), gamma);
}

/// sqrt(a / (1 - a)): scale of the invariant Cauchy density and fixed point of G_a.
[[nodiscard]] inline double invariant_scale(Alpha alpha) noexcept {
    return std::sqrt(alpha.value() / (1.0 - alpha.value()));
}

struct Preimages {
    double lower; ///< negative branch
    double upper; ///< positive branch
};

/// Both solutions of F_a(x) = xi_prime, ordered lower < 0 < upper.
///
/// The root of larger magnitude is taken from the quadratic formula with the
/// sign of xi_prime; the other follows from lower * upper = -1, which avoids
/// cancellation when |xi_prime| >> a.
[[nodiscard]] inline Preimages preimages(Alpha alpha, double xi_prime) noexcept {
    const double a = alpha.value();
    const double disc = std::hypot(xi_prime, 2.0 * a);
    if (xi_prime >= 0.0) {
        const double upper = (xi_prime + disc) / (2.0 * a);
        return {-1.0 / upper, upper};
    }
    const double lower = (xi_prime - disc) / (2.0 * a);
    return {lower, -1.0 / lower};
}

/// |dF_a/dx| = a (1 + x^2) / x^2, returned as its reciprocal x^2 / (a (1 + x^2)).
[[nodiscard]] inline double inverse_slope(Alpha alpha, double xi) noexcept {
    const double x2 = xi * xi;
    return x2 / (alpha.value() * (1.0 + x2));
}

struct OrbitTrace {
    std::vector<double> states;      ///< states[0] is the seed
    bool truncated = false;          ///< an iterate landed in the pole guard
    std::size_t last_valid_index = 0;
};

/// x_{k+1} = F_a(x_k) for k < n. Stops early, flagging truncation, when an
/// iterate falls within epsilon of the pole; that iterate is kept as the last entry.
[[nodiscard]] inline OrbitTrace iterate_orbit(Alpha alpha, OrbitState xi0, std::size_t n,
                                              double epsilon = kPoleEpsilon) {
    OrbitTrace trace;
    trace.states.reserve(n + 1);
    double x = xi0.value();
    trace.states.push_back(x);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(std::fabs(x) >= epsilon)) {
            trace.truncated = true;
            break;
        }
        x = boole_map(alpha.value(), x);
        trace.states.push_back(x);
    }
    trace.last_valid_index = trace.states.size() - 1;
    return trace;
}

[[nodiscard]] inline double cauchy_pdf(const CauchyParams& p, double xi) noexcept {
    const double d = xi - p.nu;
    return p.gamma / (std::numbers::pi * (d * d + p.gamma * p.gamma));
}

[[nodiscard]] inline double cauchy_cdf(const CauchyParams& p, double xi) noexcept {
    return 0.5 + std::atan((xi - p.nu) / p.gamma) / std::numbers::pi;
}

/// Upper-tail probability 1 - cdf, computed without cancellation in the right tail.
[[nodiscard]] inline double cauchy_sf(const CauchyParams& p, double xi) noexcept {
    return 0.5 - std::atan((xi - p.nu) / p.gamma) / std::numbers::pi;
}

[[nodiscard]] inline double cauchy_quantile(const CauchyParams& p, double u) {
    if (!(u > 0.0 && u < 1.0)) {
        std::ostringstream os;
        os << "cauchy_quantile: u must lie in (0, 1), got " << u;
        throw invalid_parameter(os.str());
    }
    return p.nu + p.gamma * std::tan(std::numbers::pi * (u - 0.5));
}

} // namespace boolemap
