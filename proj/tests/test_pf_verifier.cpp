#include "boolemap/pf_verifier.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace boolemap;

TEST(ArctanGrid, NodesAndValidation) {
    const ArctanGrid g({0, 1}, 5, 0.25);
    EXPECT_NEAR(g.node(0), -1.0, 1e-15);
    EXPECT_NEAR(g.node(2), 0.0, 1e-15);
    EXPECT_NEAR(g.node(4), 1.0, 1e-15);
    EXPECT_THROW(ArctanGrid({0, 1}, 1), invalid_parameter);
    EXPECT_THROW(ArctanGrid({0, 1}, 10, 0.0), invalid_parameter);
}

TEST(DensityGrid, TabulatedCauchyIntegratesToOne) {
    const DensityGrid d = tabulate(CauchyDensity{{0.3, 2.0}}, default_grid({0.3, 2.0}));
    EXPECT_NEAR(d.normalization_drift(), 0.0, 1e-12);
    EXPECT_NEAR(d.tail_mass(), 2e-6, 1e-12);
    EXPECT_FALSE(underresolved(d));
}

TEST(PfDensityStep, MatchesBisectionOracle) {
    const Alpha a(0.6);
    const CauchyParams p{1.3, 0.4};
    const ArctanGrid grid = default_grid({0.0, 1.0}, 257);
    const DensityGrid out = pf_density_step(a, CauchyDensity{p}, grid);
    auto rho = [p](double x) { return oracle::cauchy_pdf(p.nu, p.gamma, x); };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expected = oracle::pf_sum(0.6, rho, grid.node(i));
        EXPECT_NEAR(out.values[i], expected, 1e-12 * std::fmax(1.0, expected)) << grid.node(i);
    }
}

TEST(PfDensityStep, InvariantDensityIsFixed) {
    for (double a : {0.2, 0.5, 0.8}) {
        const CauchyParams inv{0.0, invariant_scale(Alpha(a))};
        const ArctanGrid grid = default_grid(inv);
        const DensityGrid in = tabulate(CauchyDensity{inv}, grid);
        const DensityGrid out = pf_density_step(Alpha(a), CauchyDensity{inv}, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(out.values[i], in.values[i], 1e-10 * in.values[i]);
        EXPECT_NEAR(out.tail_below, in.tail_below, 1e-14);
        EXPECT_NEAR(out.tail_above, in.tail_above, 1e-14);
    }
}

TEST(PfDensityStep, MassConservationOnDefaultGrid) {
    for (double a : {0.2, 0.5, 0.8})
        for (double nu : {-2.0, 0.0, 2.0})
            for (double g : {0.5, 1.0, 3.0}) {
                const CauchyParams p{nu, g};
                const DensityGrid out = pf_density_step(Alpha(a), CauchyDensity{p}, default_grid(p));
                EXPECT_LT(std::fabs(out.normalization_drift()), 1e-6) << a << ' ' << nu << ' ' << g;
            }
}

TEST(PfDensityStep, CoarseGridIsFlagged) {
    const CauchyParams p{1, 1};
    const DensityGrid out = pf_density_step(Alpha(0.5), CauchyDensity{p}, default_grid(p, 8));
    EXPECT_TRUE(underresolved(out));
}

TEST(PfDensityStep, TabulatedInputTracksClosedForm) {
    const Alpha a(0.5);
    const CauchyParams p{1, 1};
    const ArctanGrid grid = default_grid(p);
    const DensityGrid once = pf_density_step(a, tabulate(CauchyDensity{p}, grid));
    const CauchyParams next = parameter_step(a, HPoint::interior(1, 1)).cauchy();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::fabs(grid.node(i)) < 100) worst = std::fmax(worst, std::fabs(once.values[i] - cauchy_pdf(next, grid.node(i))));
    EXPECT_LT(worst, 1e-4);
}

TEST(PfClosedFormCheck, Examples) {
    EXPECT_LT(pf_closed_form_check(Alpha(0.5), {1, 1}, default_grid({1, 1})), 1e-10);
    EXPECT_LT(pf_closed_form_check(Alpha(0.5), {0, 1}, default_grid({0, 1})), 1e-12);
    EXPECT_LT(pf_closed_form_check(Alpha(0.9), {-3, 0.5}, default_grid({-3, 0.5})), 1e-10);
}

TEST(PfClosedFormCheck, DetectsWrongParameters) {
    // A density that is not the predicted one must be caught: shift gamma by 1%.
    const Alpha a(0.5);
    const ArctanGrid grid = default_grid({0, 1});
    const DensityGrid stepped = pf_density_step(a, CauchyDensity{{1, 1}}, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::fmax(worst, std::fabs(stepped.values[i] - cauchy_pdf({0.25, 0.7575}, grid.node(i))));
    EXPECT_GT(worst, 1e-3);
}

TEST(Fit, QuantilePointsGiveExactParameters) {
    std::vector<double> pts;
    for (int k = 1; k < 2000; ++k) pts.push_back(cauchy_quantile({0, 1}, k / 2000.0));
    std::reverse(pts.begin(), pts.end());
    const CauchyParams f = fit_cauchy(pts);
    EXPECT_NEAR(f.nu, 0.0, 1e-12);
    EXPECT_NEAR(f.gamma, 1.0, 1e-12);
}

TEST(Fit, RefusesSmallOrNonFinite) {
    std::vector<double> small(999, 1.0);
    EXPECT_THROW((void)fit_cauchy(small), insufficient_sample);
    std::vector<double> bad(2000, 1.0);
    bad[7] = NAN;
    EXPECT_THROW((void)fit_cauchy(bad), invalid_parameter);
}

TEST(Sample, DeterministicAcrossWorkerCounts) {
    const SampleBatch a = sample_cauchy({0, 1}, 300'000, 9, FitMethod::median_iqr, 1);
    const SampleBatch b = sample_cauchy({0, 1}, 300'000, 9, FitMethod::median_iqr, 4);
    const SampleBatch c = sample_cauchy({0, 1}, 300'000, 9, FitMethod::median_iqr, 4);
    EXPECT_EQ(a.points, b.points);
    EXPECT_EQ(b.points, c.points);
    const SampleBatch d = sample_cauchy({0, 1}, 300'000, 10, FitMethod::median_iqr, 4);
    EXPECT_NE(a.points, d.points);
}

TEST(Sample, Examples) {
    const SampleBatch s = sample_cauchy({0, 1}, 1'000'000, 42);
    ASSERT_TRUE(s.fitted);
    EXPECT_LT(std::fabs(s.fitted->nu), 3 * (std::numbers::pi / 2) / 1000.0);
    const SampleBatch t = sample_cauchy({5, 2}, 1'000'000, 43);
    EXPECT_LT(std::fabs(t.fitted->gamma - 2.0), 0.02);
    const SampleBatch one = sample_cauchy({0, 1}, 1, 1);
    EXPECT_EQ(one.points.size(), 1u);
    EXPECT_FALSE(one.fitted);
    EXPECT_THROW((void)sample_cauchy({0, 1}, 0, 1), invalid_parameter);
}

TEST(Fit, MillionSamplesWithinOnePercent) {
    const SampleBatch s = sample_cauchy({3, 2}, 1'000'000, 77);
    EXPECT_LT(std::fabs(s.fitted->nu - 3.0), 0.03);
    EXPECT_LT(std::fabs(s.fitted->gamma - 2.0), 0.02);
}

TEST(Fit, MleBeatsQuantileFitOnAverage) {
    double sq_q = 0.0, sq_m = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SampleBatch s = sample_cauchy({3, 2}, 20'000, 1000 + seed);
        const CauchyParams q = fit_cauchy(s.points, FitMethod::median_iqr);
        const CauchyParams m = fit_cauchy(s.points, FitMethod::mle);
        sq_q += (q.nu - 3) * (q.nu - 3) + (q.gamma - 2) * (q.gamma - 2);
        sq_m += (m.nu - 3) * (m.nu - 3) + (m.gamma - 2) * (m.gamma - 2);
    }
    EXPECT_LT(sq_m, sq_q);
}

TEST(MonteCarlo, OneStepExample) {
    const PfReport r = pf_monte_carlo_check(Alpha(0.5), {1, 1}, 1'000'000, 1, 42);
    EXPECT_LT(std::fabs(r.measured.nu - 0.25), 0.01);
    EXPECT_LT(std::fabs(r.measured.gamma - 0.75), 0.01);
    EXPECT_TRUE(r.within_tolerance);
    EXPECT_EQ(r.dropped, 0u);
}

TEST(MonteCarlo, StationaryInputStaysPut) {
    const PfReport r = pf_monte_carlo_check(Alpha(0.5), {0, 1}, 500'000, 10, 5);
    EXPECT_TRUE(r.within_tolerance) << r.measured.nu << ' ' << r.measured.gamma;
}

TEST(MonteCarlo, ConvergesTowardFixedPoint) {
    const PfReport r = pf_monte_carlo_check(Alpha(0.8), {5, 3}, 500'000, 20, 6);
    EXPECT_TRUE(r.within_tolerance) << r.measured.nu << ' ' << r.measured.gamma;
    EXPECT_LT(std::fabs(r.predicted.gamma - 2.0), 0.1);
}

TEST(MonteCarlo, TrajectoryMatchesSingleChecks) {
    const auto traj = pf_monte_carlo_trajectory(Alpha(0.7), {1, 2}, 50'000, 3, 11);
    ASSERT_EQ(traj.size(), 4u);
    const PfReport last = pf_monte_carlo_check(Alpha(0.7), {1, 2}, 50'000, 3, 11);
    EXPECT_EQ(traj.back().measured, last.measured);
}

TEST(MonteCarlo, SizePrecondition) {
    EXPECT_THROW((void)pf_monte_carlo_check(Alpha(0.5), {1, 1}, 9'999, 1, 1), invalid_parameter);
}

TEST(Ergodic, LongOrbitsMatchInvariantLaw) {
    EXPECT_LT(ergodic_orbit_check(Alpha(0.5), OrbitState(std::sqrt(2.0)), 1'000'000).ks, 0.01);
    const ErgodicReport r = ergodic_orbit_check(Alpha(0.8), OrbitState(0.3), 1'000'000);
    EXPECT_LT(r.ks, 0.01);
    EXPECT_EQ(r.invariant.gamma, 2.0);
    EXPECT_FALSE(r.degenerate);
}

TEST(Ergodic, PoleSeedTruncates) {
    try {
        (void)ergodic_orbit_check(Alpha(0.5), OrbitState(1.0), 100'000);
        FAIL() << "expected orbit_truncated";
    } catch (const orbit_truncated& e) {
        EXPECT_EQ(e.last_valid_index(), 1u);
    }
    EXPECT_THROW((void)ergodic_orbit_check(Alpha(0.5), OrbitState(2.0), 10), invalid_parameter);
}

TEST(Ergodic, KsDistanceOfExactQuantilesIsSmall) {
    std::vector<double> pts;
    for (int k = 0; k < 1000; ++k) pts.push_back(cauchy_quantile({0, 1}, (k + 0.5) / 1000.0));
    EXPECT_NEAR(ks_distance(pts, {0, 1}), 0.0005, 1e-12);
}
