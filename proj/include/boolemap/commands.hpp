#pragma once

// Drivers behind the command-line subcommands. Each takes a validated RunConfig,
// runs the relevant oracles, and fills a RunReport whose checks decide the exit status.

#include "boolemap/geometry.hpp"
#include "boolemap/orbital.hpp"
#include "boolemap/parameter_map.hpp"
#include "boolemap/pf_verifier.hpp"
#include "boolemap/report.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

namespace boolemap {

namespace detail {

inline const std::vector<std::string> kTrajectoryColumns{
    "n", "nu", "gamma", "q", "p", "conformal_factor", "distance_euclidean", "distance_fisher"};

inline std::vector<double> trajectory_row(std::size_t n, const HPoint& x, const HPoint& target) {
    const CanonicalPoint c = to_canonical(x);
    return {static_cast<double>(n),
            x.nu(),
            x.gamma(),
            c.q,
            c.p,
            conformal_factor(x),
            std::hypot(x.nu() - target.nu(), x.gamma() - target.gamma()),
            fisher_distance(x, target)};
}

inline nlohmann::ordered_json point_json(const HPoint& x) { return {{"nu", x.nu()}, {"gamma", x.gamma()}}; }

inline nlohmann::ordered_json params_json(const CauchyParams& p) { return {{"nu", p.nu}, {"gamma", p.gamma}}; }

// Relative gap between two plane points, scaled by max(1, |reference|).
inline double relative_gap(Vec2 a, Vec2 b) {
    const double scale = std::fmax(1.0, std::hypot(b[0], b[1]));
    return std::hypot(a[0] - b[0], a[1] - b[1]) / scale;
}

// Finite-difference step no larger than 1e-6 and small next to gamma.
inline double fd_step(const HPoint& x) { return 1e-6 * std::fmin(1.0, x.gamma()); }

} // namespace detail

/// Parameter-map trajectory with conformal factors and distances to the fixed point.
[[nodiscard]] inline RunReport cmd_iterate_params(const RunConfig& cfg) {
    validate(cfg);
    const Alpha alpha(cfg.alpha);
    const HPoint target = fixed_point(alpha);
    const auto traj = parameter_trajectory(alpha, HPoint::interior(cfg.nu0, cfg.gamma0), cfg.steps);

    RunReport r;
    r.config = cfg;
    r.records.columns = detail::kTrajectoryColumns;
    double worst_equivalence = 0.0;
    std::size_t left_half_plane = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        r.records.rows.push_back(detail::trajectory_row(k, traj[k], target));
        if (!(traj[k].gamma() > 0.0)) ++left_half_plane;
        if (k + 1 < traj.size()) {
            const auto s = complex_s_step(alpha, traj[k]).first;
            const auto c = complex_check_step(alpha, traj[k]).first;
            const Vec2 exact = traj[k + 1].coords();
            worst_equivalence = std::fmax(worst_equivalence, detail::relative_gap({s.real(), -s.imag()}, exact));
            worst_equivalence = std::fmax(worst_equivalence, detail::relative_gap({c.imag(), c.real()}, exact));
        }
    }

    const StabilityReport st = stability_eigenvalues(alpha);
    r.oracles["fixed_point"] = detail::point_json(target);
    r.oracles["eigenvalue"] = st.lambda1;
    r.oracles["linearly_stable"] = st.linearly_stable;
    r.oracles["quadratic_convergence"] = st.quadratic_convergence;
    r.oracles["final_distance"] = r.records.rows.back()[6];

    const HPoint fp_image = parameter_step(alpha, target);
    const HPoint x0 = traj.front();
    const HPoint mirrored = parameter_step(alpha, reflect(x0));
    const HPoint expected_mirror = reflect(traj.size() > 1 ? traj[1] : parameter_step(alpha, x0));
    r.checks.push_back(make_check("upper_half_plane_closure", static_cast<double>(left_half_plane), 0.0));
    r.checks.push_back(make_check("fixed_point_idempotence",
                                  std::hypot(fp_image.nu() - target.nu(), fp_image.gamma() - target.gamma()), 1e-14));
    r.checks.push_back(make_check("reflection_commutation",
                                  detail::relative_gap(mirrored.coords(), expected_mirror.coords()), 1e-14));
    r.checks.push_back(make_check("complex_form_equivalence", worst_equivalence, 1e-12));
    return r;
}

/// Grid and Monte Carlo verification of the Cauchy-to-Cauchy reduction along a trajectory.
[[nodiscard]] inline RunReport cmd_verify_pf(const RunConfig& cfg) {
    validate(cfg);
    const Alpha alpha(cfg.alpha);
    const HPoint target = fixed_point(alpha);
    const auto traj = parameter_trajectory(alpha, HPoint::interior(cfg.nu0, cfg.gamma0), cfg.steps);
    const ArctanGrid grid = default_grid(traj.front().cauchy(), cfg.grid_size);

    RunReport r;
    r.config = cfg;
    r.records.columns = detail::kTrajectoryColumns;
    for (const char* c : {"grid_sup_error", "mass_drift"}) r.records.columns.emplace_back(c);

    std::vector<PfReport> mc;
    if (cfg.n >= 10'000) {
        mc = pf_monte_carlo_trajectory(alpha, traj.front().cauchy(), cfg.n, cfg.steps, cfg.seed, FitMethod::median_iqr,
                                       cfg.workers);
        for (const char* c : {"nu_fit", "gamma_fit", "fit_error", "standard_error"}) r.records.columns.emplace_back(c);
    } else {
        r.warnings.push_back("Monte Carlo check skipped: --n must be at least 10000 for a fit");
    }

    double worst_sup = 0.0, worst_drift = 0.0, worst_z = 0.0;
    std::size_t worst_drift_step = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::vector<double> row = detail::trajectory_row(k, traj[k], target);
        double sup = 0.0, drift = 0.0;
        if (k == 0) {
            drift = tabulate(CauchyDensity{traj[0].cauchy()}, grid).normalization_drift();
        } else {
            sup = pf_closed_form_check(alpha, traj[k - 1].cauchy(), grid);
            drift = pf_density_step(alpha, CauchyDensity{traj[k - 1].cauchy()}, grid).normalization_drift();
        }
        worst_sup = std::fmax(worst_sup, sup);
        if (std::fabs(drift) > std::fabs(worst_drift)) {
            worst_drift = drift;
            worst_drift_step = k;
        }
        row.push_back(sup);
        row.push_back(drift);
        if (!mc.empty()) {
            const PfReport& m = mc[k];
            row.push_back(m.measured.nu);
            row.push_back(m.measured.gamma);
            row.push_back(m.sup_error);
            row.push_back(m.standard_error);
            worst_z = std::fmax(worst_z, m.sup_error / m.standard_error);
        }
        r.records.rows.push_back(std::move(row));
    }

    r.oracles["grid"] = {{"size", grid.size()},
                         {"reference", detail::params_json(grid.reference())},
                         {"sup_error", worst_sup},
                         {"max_mass_drift", worst_drift},
                         {"underresolved", std::fabs(worst_drift) > kUnderresolutionThreshold}};
    if (std::fabs(worst_drift) > kUnderresolutionThreshold) {
        r.warnings.push_back("grid under-resolved: total mass misses 1 by " + format_number(std::fabs(worst_drift)) +
                             " at step " + std::to_string(worst_drift_step) + "; increase --grid-size");
    }
    r.checks.push_back(make_check("pf_grid_sup_error", worst_sup, 1e-10));

    if (!mc.empty()) {
        const PfReport& last = mc.back();
        r.oracles["monte_carlo"] = {{"size", last.size},
                                    {"dropped", last.dropped},
                                    {"fit_method", to_string(FitMethod::median_iqr)},
                                    {"predicted", detail::params_json(last.predicted)},
                                    {"fitted", detail::params_json(last.measured)},
                                    {"delta_nu", last.measured.nu - last.predicted.nu},
                                    {"delta_gamma", last.measured.gamma - last.predicted.gamma},
                                    {"max_standard_errors", worst_z}};
        r.checks.push_back(make_check("monte_carlo_standard_errors", worst_z, 5.0));
    }
    return r;
}

/// Geometry oracles at the configured point, along its trajectory, and on the standard lattice.
[[nodiscard]] inline RunReport cmd_geometry(const RunConfig& cfg) {
    validate(cfg);
    const Alpha alpha(cfg.alpha);
    const HPoint target = fixed_point(alpha);
    const HPoint x0 = HPoint::interior(cfg.nu0, cfg.gamma0);
    const auto traj = parameter_trajectory(alpha, x0, cfg.steps);

    RunReport r;
    r.config = cfg;
    r.records.columns = detail::kTrajectoryColumns;
    for (const char* c : {"fisher_g", "omega", "pullback_deviation", "degenerate"}) r.records.columns.emplace_back(c);

    struct PointResult {
        double quadrature = 0.0;
        double pullback = 0.0;
        bool degenerate = false;
        double lie_metric = 0.0;
        double lie_form = 0.0;
        double kahler = 0.0;
        double compatibility = 0.0;
    };
    auto evaluate = [&](const HPoint& x) {
        PointResult p;
        const double h = detail::fd_step(x);
        p.quadrature = fisher_metric_quadrature(x).max_abs_diff(fisher_metric(x));
        try {
            p.pullback = verify_conformal_pullback(alpha, x, h);
        } catch (const invalid_parameter&) {
            p.degenerate = true;
        }
        const double scale = std::fmax(1.0, fisher_metric(x).g_nn);
        for (KillingField k : kAllKillingFields) {
            p.lie_metric = std::fmax(p.lie_metric, lie_derivative_metric(k, x, h).max_abs() / scale);
            p.lie_form = std::fmax(p.lie_form, std::fabs(lie_derivative_form(k, x, h)) / scale);
        }
        const TwoForm w = symplectic_form(x);
        constexpr std::array<Vec2, 4> vs{Vec2{1.0, 0.0}, Vec2{0.0, 1.0}, Vec2{0.3, -1.7}, Vec2{-2.5, 0.8}};
        for (Vec2 X : vs)
            for (Vec2 Y : vs) p.kahler = std::fmax(p.kahler, std::fabs(w(X, Y) - kahler_pairing(x, X, Y)) / scale);
        p.compatibility = metric_compatibility_defect(x, h) / scale;
        return p;
    };

    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::vector<double> row = detail::trajectory_row(k, traj[k], target);
        double deviation = 0.0;
        bool degenerate = false;
        try {
            deviation = verify_conformal_pullback(alpha, traj[k], detail::fd_step(traj[k]));
        } catch (const invalid_parameter&) {
            degenerate = true;
        }
        row.push_back(fisher_metric(traj[k]).g_nn);
        row.push_back(symplectic_form(traj[k]).omega_ng);
        row.push_back(deviation);
        row.push_back(degenerate ? 1.0 : 0.0);
        r.records.rows.push_back(std::move(row));
    }

    const PointResult at = evaluate(x0);
    const CanonicalPoint c0 = to_canonical(x0);
    nlohmann::ordered_json point = detail::point_json(x0);
    point["fisher_g"] = fisher_metric(x0).g_nn;
    point["conformal_factor"] = conformal_factor(x0);
    point["degenerate"] = at.degenerate;
    point["quadrature_error"] = at.quadrature;
    point["pullback_deviation"] = at.pullback;
    point["lie_derivative_metric"] = at.lie_metric;
    point["lie_derivative_form"] = at.lie_form;
    point["kahler_identity_error"] = at.kahler;
    point["metric_compatibility"] = at.compatibility;
    point["canonical_coefficient_reciprocal"] = canonical_form_coefficient(x0, MomentumChart::reciprocal_scale);
    point["canonical_coefficient_potential"] = canonical_form_coefficient(x0, MomentumChart::potential);
    point["symplectic_defect"] = symplectic_defect(alpha, c0, std::fmin(1e-6, 0.1 * c0.p));
    r.oracles["point"] = std::move(point);
    if (at.degenerate)
        r.warnings.push_back("conformal factor vanishes at (0, 1); pullback check skipped at (" + format_number(x0.nu()) +
                             ", " + format_number(x0.gamma()) + ")");

    PointResult worst;
    auto lattice = nlohmann::ordered_json::array();
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const HPoint x = HPoint::interior(-2.0 + i, 0.5 + 0.875 * j);
            const PointResult p = evaluate(x);
            worst.quadrature = std::fmax(worst.quadrature, p.quadrature);
            worst.pullback = std::fmax(worst.pullback, p.pullback);
            worst.lie_metric = std::fmax(worst.lie_metric, p.lie_metric);
            worst.lie_form = std::fmax(worst.lie_form, p.lie_form);
            worst.kahler = std::fmax(worst.kahler, p.kahler);
            worst.compatibility = std::fmax(worst.compatibility, p.compatibility);
            worst.degenerate = worst.degenerate || p.degenerate;
            lattice.push_back({{"nu", x.nu()},
                               {"gamma", x.gamma()},
                               {"quadrature_error", p.quadrature},
                               {"pullback_deviation", p.pullback},
                               {"lie_derivative_metric", p.lie_metric},
                               {"lie_derivative_form", p.lie_form}});
        }
    }
    r.oracles["lattice"] = std::move(lattice);

    auto both = [&](double a, double b) { return std::fmax(a, b); };
    r.checks.push_back(make_check("fisher_quadrature", both(at.quadrature, worst.quadrature), 1e-8));
    r.checks.push_back(make_check("conformal_pullback", both(at.degenerate ? 0.0 : at.pullback, worst.pullback), 1e-5));
    r.checks.push_back(make_check("lattice_nondegenerate", worst.degenerate ? 1.0 : 0.0, 0.0));
    r.checks.push_back(make_check("killing_metric", both(at.lie_metric, worst.lie_metric), 1e-6));
    r.checks.push_back(make_check("killing_form", both(at.lie_form, worst.lie_form), 1e-6));
    r.checks.push_back(make_check("kahler_identity", both(at.kahler, worst.kahler), 1e-14));
    r.checks.push_back(make_check("j_squared", j_squared_check(x0), 0.0));
    r.checks.push_back(make_check("metric_compatibility", both(at.compatibility, worst.compatibility), 1e-6));
    return r;
}

/// Orbit trace of F_a from xi0 plus the long-orbit KS distance to the invariant Cauchy law.
[[nodiscard]] inline RunReport cmd_orbit(const RunConfig& cfg) {
    validate(cfg);
    const Alpha alpha(cfg.alpha);
    const OrbitState xi0(cfg.xi0);
    const OrbitTrace trace = iterate_orbit(alpha, xi0, cfg.steps);

    RunReport r;
    r.config = cfg;
    r.records.columns = {"n", "xi"};
    for (std::size_t k = 0; k < trace.states.size(); ++k) r.records.rows.push_back({static_cast<double>(k), trace.states[k]});

    r.oracles["invariant"] = detail::params_json({0.0, invariant_scale(alpha)});
    r.oracles["truncated"] = trace.truncated;
    r.oracles["last_valid_index"] = trace.last_valid_index;
    if (trace.truncated)
        r.warnings.push_back("orbit reached the pole at index " + std::to_string(trace.last_valid_index));
    r.checks.push_back(make_check("trace_not_truncated", trace.truncated ? 1.0 : 0.0, 0.0));

    if (cfg.n < 100'000) {
        r.warnings.push_back("KS check skipped: --n must be at least 100000");
        return r;
    }
    try {
        const ErgodicReport e = ergodic_orbit_check(alpha, xi0, cfg.n);
        r.oracles["ks"] = {{"distance", e.ks}, {"n", e.n}, {"distinct", e.distinct}, {"degenerate", e.degenerate}};
        if (e.degenerate) r.warnings.push_back("orbit is eventually periodic at machine precision");
        r.checks.push_back(make_check("ks_distance", e.ks, 0.01));
        r.checks.push_back(make_check("orbit_nondegenerate", e.degenerate ? 1.0 : 0.0, 0.0));
    } catch (const orbit_truncated& t) {
        r.oracles["ks"] = {{"truncated_at", t.last_valid_index()}};
        r.warnings.push_back(std::string("KS orbit truncated: ") + t.what());
        r.checks.push_back(make_check("ks_orbit_not_truncated", 1.0, 0.0));
    }
    return r;
}

/// Validates, dispatches on cfg.command, and records the wall time.
[[nodiscard]] inline RunReport run(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    RunReport r;
    switch (cfg.command) {
    case Command::iterate_params: r = cmd_iterate_params(cfg); break;
    case Command::verify_pf: r = cmd_verify_pf(cfg); break;
    case Command::geometry: r = cmd_geometry(cfg); break;
    case Command::orbit: r = cmd_orbit(cfg); break;
    }
    r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace boolemap
