#include "boolemap/parameter_map.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace boolemap;

namespace {

struct RandomPoints {
    std::mt19937_64 rng{2024};
    std::uniform_real_distribution<double> nu{-10.0, 10.0};
    std::uniform_real_distribution<double> log_gamma{-3.0, 3.0};
    std::uniform_real_distribution<double> a{0.01, 0.99};

    HPoint point() { return HPoint::interior(nu(rng), std::exp(log_gamma(rng))); }
    Alpha alpha() { return Alpha(a(rng)); }
};

void expect_point(const HPoint& x, double nu, double gamma, double tol) {
    EXPECT_NEAR(x.nu(), nu, tol);
    EXPECT_NEAR(x.gamma(), gamma, tol);
}

} // namespace

TEST(HPoint, Construction) {
    EXPECT_THROW((void)HPoint::interior(0, 0), invalid_parameter);
    EXPECT_THROW((void)HPoint::interior(0, -1), invalid_parameter);
    EXPECT_THROW((void)HPoint::interior(NAN, 1), invalid_parameter);
    EXPECT_TRUE(HPoint::boundary(2).on_boundary());
}

TEST(ParameterStep, Examples) {
    expect_point(parameter_step(Alpha(0.5), HPoint::interior(0, 1)), 0, 1, 0);
    expect_point(parameter_step(Alpha(0.5), HPoint::interior(1, 1)), 0.25, 0.75, 1e-16);
    expect_point(parameter_step(Alpha(0.8), HPoint::interior(0, 2)), 0, 2, 1e-15);
}

TEST(ParameterStep, BoundaryReducesToBooleTransform) {
    const HPoint b = parameter_step(Alpha(0.5), HPoint::boundary(2.0));
    EXPECT_TRUE(b.on_boundary());
    EXPECT_DOUBLE_EQ(b.nu(), 0.75);
    EXPECT_THROW((void)parameter_step(Alpha(0.5), HPoint::boundary(0.0)), singular_input);
}

TEST(ParameterStep, ClosureOfUpperHalfPlane) {
    RandomPoints r;
    for (int i = 0; i < 10000; ++i) EXPECT_GT(parameter_step(r.alpha(), r.point()).gamma(), 0.0);
}

TEST(ParameterStep, MatchesComplexArithmeticOracle) {
    RandomPoints r;
    for (int i = 0; i < 10000; ++i) {
        const Alpha a = r.alpha();
        const HPoint x = r.point();
        const HPoint y = parameter_step(a, x);
        const auto o = oracle::step_complex(a.value(), x.nu(), x.gamma());
        const double scale = std::fmax(1.0, std::hypot(o[0], o[1]));
        EXPECT_LE(std::hypot(y.nu() - o[0], y.gamma() - o[1]), 1e-12 * scale);
    }
}

TEST(ParameterTrajectory, LengthAndStart) {
    const auto t = parameter_trajectory(Alpha(0.5), HPoint::interior(1, 1), 3);
    ASSERT_EQ(t.size(), 4u);
    expect_point(t[1], 0.25, 0.75, 1e-16);
    expect_point(t[2], -0.075, 0.975, 1e-15);
}

TEST(FixedPoint, Examples) {
    expect_point(fixed_point(Alpha(0.5)), 0, 1, 0);
    expect_point(fixed_point(Alpha(0.8)), 0, 2, 1e-15);
    expect_point(fixed_point(Alpha(0.1)), 0, 1.0 / 3.0, 1e-15);
}

TEST(FixedPoint, Idempotent) {
    for (double a = 0.05; a < 1.0; a += 0.05) {
        const HPoint f = fixed_point(Alpha(a));
        const HPoint g = parameter_step(Alpha(a), f);
        EXPECT_LE(std::hypot(f.nu() - g.nu(), f.gamma() - g.gamma()), 1e-14);
    }
}

TEST(Jacobian, FixedPointExamples) {
    const Jacobian2 j5 = jacobian_analytic(Alpha(0.5), fixed_point(Alpha(0.5)));
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(j5(i, k), 0.0, 1e-15);
    const Jacobian2 j8 = jacobian_analytic(Alpha(0.8), fixed_point(Alpha(0.8)));
    EXPECT_NEAR(j8(0, 0), 0.6, 1e-12);
    EXPECT_NEAR(j8(1, 1), 0.6, 1e-12);
    EXPECT_NEAR(j8(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(j8(1, 0), 0.0, 1e-15);
}

TEST(Jacobian, MatchesFiveStencilDifferences) {
    RandomPoints r;
    for (int i = 0; i < 2000; ++i) {
        const Alpha a = r.alpha();
        const HPoint x = HPoint::interior(r.nu(r.rng) / 3.0, std::exp(r.log_gamma(r.rng) / 3.0));
        auto f = [a](oracle::P2 v) {
            const auto o = oracle::step_complex(a.value(), v[0], v[1]);
            return o;
        };
        const auto fd = oracle::jacobian5(f, {x.nu(), x.gamma()}, 1e-4 * x.gamma());
        const Jacobian2 j = jacobian_analytic(a, x);
        for (int row = 0; row < 2; ++row)
            for (int col = 0; col < 2; ++col) EXPECT_NEAR(j(row, col), fd[row][col], 1e-6) << x.nu() << ' ' << x.gamma();
    }
}

TEST(Stability, Examples) {
    const StabilityReport s5 = stability_eigenvalues(Alpha(0.5));
    EXPECT_EQ(s5.lambda1, 0.0);
    EXPECT_EQ(s5.lambda2, 0.0);
    EXPECT_TRUE(s5.quadratic_convergence);
    const StabilityReport s9 = stability_eigenvalues(Alpha(0.9));
    EXPECT_NEAR(s9.lambda1, 0.8, 1e-15);
    EXPECT_NEAR(s9.lambda2, 0.8, 1e-15);
    EXPECT_TRUE(s9.linearly_stable);
    EXPECT_FALSE(s9.quadratic_convergence);
    EXPECT_DOUBLE_EQ(stability_eigenvalues(Alpha(0.25)).lambda1, -0.5);
}

TEST(Reflect, ExamplesAndCommutation) {
    expect_point(reflect(HPoint::interior(1, 2)), -1, 2, 0);
    expect_point(reflect(HPoint::interior(0, 1)), 0, 1, 0);
    RandomPoints r;
    for (int i = 0; i < 5000; ++i) {
        const Alpha a = r.alpha();
        const HPoint x = r.point();
        const HPoint lhs = parameter_step(a, reflect(x));
        const HPoint rhs = reflect(parameter_step(a, x));
        EXPECT_LE(std::hypot(lhs.nu() - rhs.nu(), lhs.gamma() - rhs.gamma()), 1e-14 * std::fmax(1.0, std::hypot(rhs.nu(), rhs.gamma())));
    }
}

TEST(ComplexForms, Examples) {
    const auto s = complex_s_step(Alpha(0.5), HPoint::interior(0, 1)).first;
    EXPECT_NEAR(s.real(), 0.0, 1e-16);
    EXPECT_NEAR(s.imag(), -1.0, 1e-16);
    const auto c0 = complex_check_step(Alpha(0.5), HPoint::interior(0, 1)).first;
    EXPECT_NEAR(c0.real(), 1.0, 1e-16);
    EXPECT_NEAR(c0.imag(), 0.0, 1e-16);
    const auto c1 = complex_check_step(Alpha(0.5), HPoint::interior(1, 1)).first;
    EXPECT_NEAR(c1.real(), 0.75, 1e-16);
    EXPECT_NEAR(c1.imag(), 0.25, 1e-16);
}

TEST(ComplexForms, ConjugatePartners) {
    RandomPoints r;
    for (int i = 0; i < 1000; ++i) {
        const Alpha a = r.alpha();
        const HPoint x = r.point();
        const ComplexPair s = complex_s_step(a, x);
        EXPECT_NEAR(std::abs(s.second - std::conj(s.first)), 0.0, 1e-12 * std::fmax(1.0, std::abs(s.first)));
        const ComplexPair c = complex_check_step(a, x);
        // G_a(-conj(z)) = -conj(G_a(z))
        EXPECT_NEAR(std::abs(c.second + std::conj(c.first)), 0.0, 1e-12 * std::fmax(1.0, std::abs(c.first)));
    }
}

TEST(OrbitalFromParameter, Examples) {
    const Vec2 a = orbital_from_parameter(Alpha(0.5), 1, 1);
    EXPECT_NEAR(a[0], 0.25, 1e-16);
    EXPECT_NEAR(a[1], 0.75, 1e-16);
    const Vec2 b = orbital_from_parameter(Alpha(0.5), 2, 0);
    EXPECT_DOUBLE_EQ(b[0], 0.75);
    EXPECT_EQ(b[1], 0.0);
    const Vec2 c = orbital_from_parameter(Alpha(0.5), 0, 1);
    EXPECT_EQ(c[0], 0.0);
    EXPECT_DOUBLE_EQ(c[1], 1.0);
    EXPECT_THROW((void)orbital_from_parameter(Alpha(0.5), 0, 0), degenerate_input);
}

TEST(Canonical, Examples) {
    const CanonicalPoint c = to_canonical(HPoint::interior(0, 1));
    EXPECT_EQ(c.q, 0.0);
    EXPECT_EQ(c.p, 0.5);
    const CanonicalPoint d = to_canonical(HPoint::interior(3, 0.25));
    EXPECT_EQ(d.q, 3.0);
    EXPECT_EQ(d.p, 2.0);
    const CanonicalPoint e = canonical_step(Alpha(0.5), {0, 0.5});
    EXPECT_NEAR(e.q, 0.0, 1e-16);
    EXPECT_NEAR(e.p, 0.5, 1e-16);
    const CanonicalPoint f = canonical_step(Alpha(0.5), {1, 0.5});
    EXPECT_NEAR(f.q, 0.25, 1e-16);
    EXPECT_NEAR(f.p, 1.0 / 1.5, 1e-15);
    EXPECT_THROW((void)to_canonical(HPoint::boundary(1)), invalid_parameter);
    EXPECT_THROW((void)CanonicalPoint::make(0, 0), invalid_parameter);
}

TEST(Canonical, StepConjugatesParameterStep) {
    RandomPoints r;
    for (int i = 0; i < 2000; ++i) {
        const Alpha a = r.alpha();
        const HPoint x = r.point();
        const HPoint via = from_canonical(canonical_step(a, to_canonical(x)));
        const HPoint direct = parameter_step(a, x);
        EXPECT_NEAR(via.nu(), direct.nu(), 1e-12 * std::fmax(1.0, std::fabs(direct.nu())));
        EXPECT_NEAR(via.gamma(), direct.gamma(), 1e-12 * std::fmax(1.0, direct.gamma()));
    }
}

TEST(Canonical, JacobianIsNotUnimodular) {
    const double h = 1e-4;
    auto f = [](oracle::P2 v) {
        const CanonicalPoint c = canonical_step(Alpha(0.5), CanonicalPoint::make(v[0], v[1]));
        return oracle::P2{c.q, c.p};
    };
    const auto j = oracle::jacobian5(f, {1.0, 0.5}, h);
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    EXPECT_GT(std::fabs(det - 1.0), 0.1);
    EXPECT_NEAR(det, 5.0 / 9.0, 1e-9);
}

TEST(Convergence, HalfAlphaSuperlinear) {
    const ConvergenceReport r = convergence_bound_check(Alpha(0.5), 2.0, 5);
    EXPECT_DOUBLE_EQ(r.gammas[1], 1.25);
    EXPECT_DOUBLE_EQ(r.gammas[2], 1.025);
    EXPECT_NEAR(r.gammas[3], 1.000304878048780, 1e-14);
    EXPECT_TRUE(r.bound_holds);
    EXPECT_TRUE(r.superlinear);
    for (std::size_t n = 2; n < r.resolved_until; ++n) EXPECT_LE(r.ratios[n], 0.5);
}

TEST(Convergence, AlphaPointEight) {
    const ConvergenceReport r = convergence_bound_check(Alpha(0.8), 10.0, 40);
    EXPECT_TRUE(r.bound_holds);
    for (std::size_t n = 2; n < r.resolved_until; ++n) EXPECT_LE(r.ratios[n], 0.8);
}

TEST(Convergence, StartAtFixedPoint) {
    const ConvergenceReport r = convergence_bound_check(Alpha(0.5), 1.0, 5);
    for (double d : r.deviations) EXPECT_EQ(d, 0.0);
    EXPECT_EQ(r.resolved_until, 0u);
    EXPECT_TRUE(r.bound_holds);
}

TEST(Convergence, SmallAlphaViolatesStatedBound) {
    const ConvergenceReport r = convergence_bound_check(Alpha(0.1), 1.0 / 6.0, 20);
    EXPECT_FALSE(r.bound_holds);
    EXPECT_EQ(r.first_violation, 2);
}

TEST(Convergence, Preconditions) {
    EXPECT_THROW((void)convergence_bound_check(Alpha(0.5), 0.0, 5), invalid_parameter);
    EXPECT_THROW((void)convergence_bound_check(Alpha(0.5), 1.0, 2), invalid_parameter);
}

TEST(Asymptotic, Examples) {
    const AsymptoticErrors big = asymptotic_check(Alpha(0.5), HPoint::interior(100, 100));
    EXPECT_LE(big.nu_relative, 5e-5);
    EXPECT_LE(big.gamma_relative, 5e-5);
    const AsymptoticErrors small = asymptotic_check(Alpha(0.5), HPoint::interior(0.1, 0.1));
    EXPECT_NEAR(small.bound, 50.0, 1e-12);
    EXPECT_GT(small.nu_relative, 1.0);
    const AsymptoticErrors far = asymptotic_check(Alpha(0.9), HPoint::interior(1000, 1));
    EXPECT_LE(far.nu_relative, 1.01e-6);
}

TEST(Asymptotic, BoundedByReciprocalArea) {
    RandomPoints r;
    for (int i = 0; i < 2000; ++i) {
        const AsymptoticErrors e = asymptotic_check(r.alpha(), r.point());
        EXPECT_LE(e.nu_relative, e.bound * (1 + 1e-12));
        EXPECT_LE(e.gamma_relative, e.bound * (1 + 1e-12));
    }
}

TEST(FixedPointSearch, ConvergesFromRandomSeeds) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> nu(-10, 10), gamma(0.0, 10.0);
    for (int k = 1; k <= 9; ++k) {
        const Alpha a(k / 10.0);
        for (int i = 0; i < 50; ++i) {
            double g = gamma(rng);
            if (g == 0.0) g = 1e-3;
            const FixedPointSearch s = iterate_to_fixed_point(a, HPoint::interior(nu(rng), g), 1e-8, 500);
            EXPECT_TRUE(s.converged) << a.value();
        }
    }
}

TEST(FisherDistance, Properties) {
    const HPoint x = HPoint::interior(0, 1), y = HPoint::interior(0, std::exp(1.0));
    EXPECT_NEAR(fisher_distance(x, y), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_EQ(fisher_distance(x, x), 0.0);
}
