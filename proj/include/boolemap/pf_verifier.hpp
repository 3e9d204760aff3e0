#pragma once

// Brute-force counterparts of the parameter-map reduction:
//  * grid evaluation of the two-branch Perron-Frobenius sum
//        rho'(x') = sum over F_a(x) = x' of rho(x) / |F_a'(x)|,
//  * Monte Carlo push-forward of Cauchy samples with parameter fitting,
//  * long-orbit comparison against the invariant density.

#include "boolemap/errors.hpp"
#include "boolemap/orbital.hpp"
#include "boolemap/parameter_map.hpp"
#include "boolemap/random.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

namespace boolemap {

template <class D>
concept DensityModel = requires(const D& d, double x) {
    { d.pdf(x) } -> std::convertible_to<double>;
    { d.cdf(x) } -> std::convertible_to<double>;
};

struct CauchyDensity {
    CauchyParams params;

    [[nodiscard]] double pdf(double x) const noexcept { return cauchy_pdf(params, x); }
    [[nodiscard]] double cdf(double x) const noexcept { return cauchy_cdf(params, x); }
    [[nodiscard]] double sf(double x) const noexcept { return cauchy_sf(params, x); }
};

namespace detail {
template <DensityModel D>
[[nodiscard]] double upper_tail(const D& d, double x) {
    if constexpr (requires { d.sf(x); })
        return d.sf(x);
    else
        return 1.0 - d.cdf(x);
}
} // namespace detail

/// Nodes x_i = nu + gamma tan(pi (u_i - 1/2)) with u_i uniform on [tail, 1 - tail]:
/// equal probability spacing under a reference Cauchy density.
class ArctanGrid {
public:
    ArctanGrid(CauchyParams reference, std::size_t count, double tail_probability = 1e-6)
        : reference_(reference), u_lo_(tail_probability), u_hi_(1.0 - tail_probability), count_(count) {
        if (count < 2) throw invalid_parameter("ArctanGrid needs at least 2 nodes");
        if (!(tail_probability > 0.0 && tail_probability < 0.5))
            throw invalid_parameter("ArctanGrid tail probability must lie in (0, 1/2)");
    }

    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] const CauchyParams& reference() const noexcept { return reference_; }
    [[nodiscard]] double du() const noexcept { return (u_hi_ - u_lo_) / static_cast<double>(count_ - 1); }
    [[nodiscard]] double u(std::size_t i) const noexcept { return u_lo_ + du() * static_cast<double>(i); }
    [[nodiscard]] double node(std::size_t i) const { return cauchy_quantile(reference_, u(i)); }
    [[nodiscard]] double lower() const { return node(0); }
    [[nodiscard]] double upper() const { return node(count_ - 1); }

    /// dx/du at node i.
    [[nodiscard]] double jacobian(std::size_t i) const {
        const double t = (node(i) - reference_.nu) / reference_.gamma;
        return std::numbers::pi * reference_.gamma * (1.0 + t * t);
    }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> out(count_);
        for (std::size_t i = 0; i < count_; ++i) out[i] = node(i);
        return out;
    }

private:
    CauchyParams reference_;
    double u_lo_;
    double u_hi_;
    std::size_t count_;
};

/// Density tabulated on an ArctanGrid, with the probability outside the grid carried analytically.
struct DensityGrid {
    ArctanGrid grid;
    std::vector<double> values;
    double tail_below = 0.0;
    double tail_above = 0.0;

    [[nodiscard]] std::vector<double> nodes() const { return grid.nodes(); }
    [[nodiscard]] double tail_mass() const noexcept { return tail_below + tail_above; }

    /// Trapezoid rule in the grid's native coordinate u, integrand rho(x(u)) dx/du.
    [[nodiscard]] double integral() const {
        double s = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
            s += w * values[i] * grid.jacobian(i);
        }
        return s * grid.du();
    }

    [[nodiscard]] double normalization_drift() const { return integral() + tail_mass() - 1.0; }
};

/// Grid is flagged as under-resolved when total mass misses 1 by more than this.
inline constexpr double kUnderresolutionThreshold = 1e-3;

[[nodiscard]] inline bool underresolved(const DensityGrid& d) {
    return std::fabs(d.normalization_drift()) > kUnderresolutionThreshold;
}

/// 4096 nodes spanning reference quantiles 1e-6 .. 1 - 1e-6.
[[nodiscard]] inline ArctanGrid default_grid(CauchyParams reference, std::size_t count = 4096) {
    return ArctanGrid(reference, count, 1e-6);
}

template <DensityModel D>
[[nodiscard]] DensityGrid tabulate(const D& density, const ArctanGrid& grid) {
    DensityGrid out{grid, {}, 0.0, 0.0};
    out.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = density.pdf(grid.node(i));
    out.tail_below = density.cdf(grid.lower());
    out.tail_above = detail::upper_tail(density, grid.upper());
    return out;
}

/// Piecewise-linear view of a DensityGrid (linear in u of rho dx/du), with tails shaped
/// like the grid's reference Cauchy. Accuracy is O(du^2).
class GridDensity {
public:
    explicit GridDensity(const DensityGrid& d) : d_(&d), cumulative_(d.values.size(), 0.0) {
        const double du = d.grid.du();
        for (std::size_t i = 1; i < d.values.size(); ++i)
            cumulative_[i] = cumulative_[i - 1] + 0.5 * du * (scaled(i - 1) + scaled(i));
    }

    [[nodiscard]] double pdf(double x) const {
        const CauchyParams& ref = d_->grid.reference();
        if (x < d_->grid.lower()) return d_->tail_below * cauchy_pdf(ref, x) / cauchy_cdf(ref, d_->grid.lower());
        if (x > d_->grid.upper()) return d_->tail_above * cauchy_pdf(ref, x) / cauchy_sf(ref, d_->grid.upper());
        auto [i, t] = locate(x);
        const double f = (1.0 - t) * scaled(i) + t * scaled(i + 1);
        return f * cauchy_pdf(ref, x);
    }

    [[nodiscard]] double cdf(double x) const {
        const CauchyParams& ref = d_->grid.reference();
        if (x < d_->grid.lower()) return d_->tail_below * cauchy_cdf(ref, x) / cauchy_cdf(ref, d_->grid.lower());
        if (x > d_->grid.upper())
            return 1.0 - d_->tail_above * cauchy_sf(ref, x) / cauchy_sf(ref, d_->grid.upper());
        auto [i, t] = locate(x);
        const double du = d_->grid.du();
        const double fi = scaled(i), fj = scaled(i + 1);
        return d_->tail_below + cumulative_[i] + du * (fi * t + 0.5 * (fj - fi) * t * t);
    }

private:
    // rho(x(u)) dx/du divided by pi gamma_ref, i.e. rho / ref_pdf, so pdf = scaled * ref_pdf.
    [[nodiscard]] double scaled(std::size_t i) const { return d_->values[i] / cauchy_pdf(d_->grid.reference(), d_->grid.node(i)); }

    [[nodiscard]] std::pair<std::size_t, double> locate(double x) const {
        const double u = cauchy_cdf(d_->grid.reference(), x);
        const double pos = (u - d_->grid.u(0)) / d_->grid.du();
        const std::size_t last = d_->values.size() - 2;
        const std::size_t i = std::min<std::size_t>(last, static_cast<std::size_t>(std::max(0.0, std::floor(pos))));
        return {i, std::clamp(pos - static_cast<double>(i), 0.0, 1.0)};
    }

    const DensityGrid* d_;
    std::vector<double> cumulative_;
};

/// One Perron-Frobenius step of `density` under F_a, evaluated at the nodes of `grid`.
/// Output tail masses come from the input CDF on the preimage intervals.
template <DensityModel D>
[[nodiscard]] DensityGrid pf_density_step(Alpha alpha, const D& density, const ArctanGrid& grid) {
    DensityGrid out{grid, {}, 0.0, 0.0};
    out.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Preimages pre = preimages(alpha, grid.node(i));
        out.values[i] = density.pdf(pre.lower) * inverse_slope(alpha, pre.lower) +
                        density.pdf(pre.upper) * inverse_slope(alpha, pre.upper);
    }
    // F_a is increasing on each branch, so {F_a < c} = (-inf, lower(c)) u (0, upper(c)).
    const Preimages lo = preimages(alpha, grid.lower());
    const Preimages hi = preimages(alpha, grid.upper());
    const double at_zero = density.cdf(0.0);
    out.tail_below = density.cdf(lo.lower) + (density.cdf(lo.upper) - at_zero);
    out.tail_above = (at_zero - density.cdf(hi.lower)) + detail::upper_tail(density, hi.upper);
    return out;
}

/// Same step starting from tabulated data; the input is interpolated (see GridDensity).
[[nodiscard]] inline DensityGrid pf_density_step(Alpha alpha, const DensityGrid& rho) {
    return pf_density_step(alpha, GridDensity(rho), rho.grid);
}

/// sup over nodes with |x| < max_abs_node of |PF(C(.; p)) - C(.; parameter_step(p))|.
[[nodiscard]] inline double pf_closed_form_check(Alpha alpha, const CauchyParams& p, const ArctanGrid& grid,
                                                 double max_abs_node = 1e3) {
    const DensityGrid stepped = pf_density_step(alpha, CauchyDensity{p}, grid);
    const CauchyParams predicted = parameter_step(alpha, HPoint::interior(p.nu, p.gamma)).cauchy();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        if (std::fabs(x) >= max_abs_node) continue;
        worst = std::fmax(worst, std::fabs(stepped.values[i] - cauchy_pdf(predicted, x)));
    }
    return worst;
}

enum class FitMethod { median_iqr, mle };

[[nodiscard]] constexpr const char* to_string(FitMethod m) noexcept {
    return m == FitMethod::mle ? "mle" : "median_iqr";
}

inline constexpr std::size_t kMinFitSize = 1000;

/// Sample quantile at plotting position (n + 1) p on sorted data.
[[nodiscard]] inline double sorted_quantile(std::span<const double> sorted, double prob) {
    const std::size_t n = sorted.size();
    const double h = static_cast<double>(n + 1) * prob;
    const double k = std::floor(h);
    if (k < 1.0) return sorted.front();
    if (k >= static_cast<double>(n)) return sorted.back();
    const auto i = static_cast<std::size_t>(k);
    return sorted[i - 1] + (h - k) * (sorted[i] - sorted[i - 1]);
}

namespace detail {

inline CauchyParams fit_median_iqr(std::span<const double> sorted) {
    const double med = sorted_quantile(sorted, 0.5);
    const double half_iqr = 0.5 * (sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25));
    if (!(half_iqr > 0.0)) throw degenerate_input("sample has zero interquartile range");
    return {med, half_iqr};
}

struct CauchyLikelihood {
    double value = 0.0;
    Vec2 grad{};  ///< per-sample mean
    Mat2 hess{};  ///< per-sample mean
};

inline CauchyLikelihood cauchy_likelihood(std::span<const double> x, double nu, double gamma) {
    CauchyLikelihood r;
    const double g2 = gamma * gamma;
    double ll = 0.0, gn = 0.0, gg = 0.0, hnn = 0.0, hng = 0.0, hgg = 0.0;
    for (double xi : x) {
        const double d = xi - nu;
        const double den = d * d + g2;
        const double den2 = den * den;
        ll += std::log(gamma) - std::log(den);
        gn += 2.0 * d / den;
        gg += 1.0 / gamma - 2.0 * gamma / den;
        hnn += 2.0 * (d * d - g2) / den2;
        hng += -4.0 * gamma * d / den2;
        hgg += -1.0 / g2 - 2.0 * (d * d - g2) / den2;
    }
    const double n = static_cast<double>(x.size());
    r.value = ll / n;
    r.grad = {gn / n, gg / n};
    r.hess(0, 0) = hnn / n;
    r.hess(0, 1) = r.hess(1, 0) = hng / n;
    r.hess(1, 1) = hgg / n;
    return r;
}

inline CauchyParams fit_mle(std::span<const double> sorted) {
    CauchyParams p = fit_median_iqr(sorted);
    for (int iter = 0; iter < 100; ++iter) {
        const CauchyLikelihood l = cauchy_likelihood(sorted, p.nu, p.gamma);
        if (std::hypot(l.grad[0], l.grad[1]) < 1e-10) return p;
        const double det = l.hess.det();
        Vec2 step{};
        // Newton direction when the Hessian is negative definite, gradient ascent otherwise.
        if (l.hess(0, 0) < 0.0 && det > 0.0) {
            step[0] = -(l.hess(1, 1) * l.grad[0] - l.hess(0, 1) * l.grad[1]) / det;
            step[1] = -(-l.hess(1, 0) * l.grad[0] + l.hess(0, 0) * l.grad[1]) / det;
        } else {
            step = {l.grad[0] * p.gamma * p.gamma, l.grad[1] * p.gamma * p.gamma};
        }
        double t = 1.0;
        for (int halve = 0; halve < 60; ++halve, t *= 0.5) {
            const CauchyParams trial{p.nu + t * step[0], p.gamma + t * step[1]};
            // Near the optimum the likelihood gain drops below rounding; accept ties at that level.
            const double slack = 1e-14 * std::fmax(1.0, std::fabs(l.value));
            if (trial.gamma > 0.0 && cauchy_likelihood(sorted, trial.nu, trial.gamma).value >= l.value - slack) {
                p = trial;
                break;
            }
        }
    }
    const CauchyLikelihood l = cauchy_likelihood(sorted, p.nu, p.gamma);
    if (std::hypot(l.grad[0], l.grad[1]) < 1e-10) return p;
    std::ostringstream os;
    os << "Cauchy MLE did not converge in 100 iterations (gradient norm " << std::hypot(l.grad[0], l.grad[1]) << ")";
    throw convergence_failure(os.str());
}

} // namespace detail

/// Fits (nu, gamma) to at least kMinFitSize finite points. Input order does not matter:
/// the points are sorted before any quantile is taken.
[[nodiscard]] inline CauchyParams fit_cauchy(std::span<const double> points, FitMethod method = FitMethod::median_iqr) {
    if (points.size() < kMinFitSize) {
        std::ostringstream os;
        os << "fit_cauchy needs at least " << kMinFitSize << " points, got " << points.size();
        throw insufficient_sample(os.str());
    }
    std::vector<double> sorted(points.begin(), points.end());
    if (!std::all_of(sorted.begin(), sorted.end(), [](double v) { return std::isfinite(v); }))
        throw invalid_parameter("fit_cauchy: points must be finite");
    std::sort(sorted.begin(), sorted.end());
    return method == FitMethod::mle ? detail::fit_mle(sorted) : detail::fit_median_iqr(sorted);
}

/// Asymptotic standard error of the median and of the half-IQR for scale gamma: pi gamma / (2 sqrt(n)).
[[nodiscard]] inline double cauchy_fit_standard_error(double gamma, std::size_t n) {
    return std::numbers::pi * gamma / (2.0 * std::sqrt(static_cast<double>(n)));
}

inline constexpr std::size_t kSampleBlock = std::size_t{1} << 16;

/// Fills out[i] with Cauchy draws; block b of kSampleBlock points uses stream (seed, b).
inline void fill_cauchy(std::span<double> out, const CauchyParams& p, std::uint64_t seed, unsigned workers = 0) {
    const std::size_t blocks = (out.size() + kSampleBlock - 1) / kSampleBlock;
    parallel_for(
        blocks,
        [&](std::size_t b) {
            auto engine = make_stream(seed, b);
            const std::size_t end = std::min(out.size(), (b + 1) * kSampleBlock);
            for (std::size_t i = b * kSampleBlock; i < end; ++i)
                out[i] = p.nu + p.gamma * std::tan(std::numbers::pi * (open_unit(engine) - 0.5));
        },
        workers);
}

struct SampleBatch {
    std::uint64_t seed = 0;
    std::size_t size = 0;
    std::vector<double> points;
    std::optional<CauchyParams> fitted; ///< empty when size < kMinFitSize
    FitMethod fit_method = FitMethod::median_iqr;
};

[[nodiscard]] inline SampleBatch sample_cauchy(const CauchyParams& p, std::size_t n, std::uint64_t seed,
                                               FitMethod method = FitMethod::median_iqr, unsigned workers = 0) {
    if (n < 1) throw invalid_parameter("sample_cauchy needs n >= 1");
    SampleBatch batch;
    batch.seed = seed;
    batch.size = n;
    batch.fit_method = method;
    batch.points.resize(n);
    fill_cauchy(batch.points, p, seed, workers);
    if (n >= kMinFitSize) batch.fitted = fit_cauchy(batch.points, method);
    return batch;
}

struct PfReport {
    Alpha alpha{0.5};
    CauchyParams input;
    CauchyParams predicted;
    CauchyParams measured;
    double sup_error = 0.0;       ///< max(|measured.nu - predicted.nu|, |measured.gamma - predicted.gamma|)
    std::size_t n_steps = 0;
    std::size_t size = 0;
    std::size_t dropped = 0;      ///< samples that hit the pole guard
    double standard_error = 0.0;  ///< fit standard error at the predicted scale
    bool within_tolerance = false; ///< sup_error <= 5 standard errors
};

/// Largest tolerated fraction of samples lost to the pole guard.
inline constexpr double kMaxDroppedFraction = 1e-4;

namespace detail {

// Applies F_a once to every point; points already dropped (NaN) stay dropped and
// points inside the pole guard become NaN. Returns the number newly dropped.
inline std::size_t advance_points(std::span<double> points, Alpha alpha, unsigned workers) {
    const std::size_t blocks = (points.size() + kSampleBlock - 1) / kSampleBlock;
    std::vector<std::size_t> dropped(blocks, 0);
    const double a = alpha.value();
    parallel_for(
        blocks,
        [&](std::size_t b) {
            const std::size_t end = std::min(points.size(), (b + 1) * kSampleBlock);
            for (std::size_t i = b * kSampleBlock; i < end; ++i) {
                double& x = points[i];
                if (std::isnan(x)) continue;
                if (!(std::fabs(x) >= kPoleEpsilon)) {
                    x = std::numeric_limits<double>::quiet_NaN();
                    ++dropped[b];
                    continue;
                }
                x = boole_map(a, x);
            }
        },
        workers);
    std::size_t total = 0;
    for (std::size_t d : dropped) total += d;
    return total;
}

inline PfReport summarize_fit(Alpha alpha, const CauchyParams& input, const HPoint& predicted, std::span<const double> points,
                              std::size_t steps, std::size_t dropped, FitMethod method) {
    if (static_cast<double>(dropped) > kMaxDroppedFraction * static_cast<double>(points.size())) {
        std::ostringstream os;
        os << "Monte Carlo push-forward: " << dropped << " of " << points.size() << " samples hit the pole";
        throw singular_input(os.str());
    }
    std::vector<double> kept;
    kept.reserve(points.size() - dropped);
    for (double v : points)
        if (!std::isnan(v)) kept.push_back(v);
    PfReport r;
    r.alpha = alpha;
    r.input = input;
    r.n_steps = steps;
    r.dropped = dropped;
    r.size = kept.size();
    r.predicted = predicted.cauchy();
    r.measured = fit_cauchy(kept, method);
    r.sup_error = std::fmax(std::fabs(r.measured.nu - r.predicted.nu), std::fabs(r.measured.gamma - r.predicted.gamma));
    r.standard_error = cauchy_fit_standard_error(r.predicted.gamma, r.size);
    r.within_tolerance = r.sup_error <= 5.0 * r.standard_error;
    return r;
}

inline void require_monte_carlo_size(std::size_t n) {
    if (n < 10'000) throw invalid_parameter("Monte Carlo push-forward needs n >= 1e4");
}

} // namespace detail

/// Samples C(p), pushes every point through F_a `steps` times, fits, and compares with
/// `steps` iterations of the parameter map. Pole hits are dropped and counted.
[[nodiscard]] inline PfReport pf_monte_carlo_check(Alpha alpha, const CauchyParams& p, std::size_t n, std::size_t steps,
                                                   std::uint64_t seed, FitMethod method = FitMethod::median_iqr,
                                                   unsigned workers = 0) {
    detail::require_monte_carlo_size(n);
    std::vector<double> points(n);
    fill_cauchy(points, p, seed, workers);
    std::size_t dropped = 0;
    HPoint x = HPoint::interior(p.nu, p.gamma);
    for (std::size_t s = 0; s < steps; ++s) {
        dropped += detail::advance_points(points, alpha, workers);
        x = parameter_step(alpha, x);
    }
    return detail::summarize_fit(alpha, p, x, points, steps, dropped, method);
}

/// Like pf_monte_carlo_check but fits after every step of one sample; result[k] covers k steps.
[[nodiscard]] inline std::vector<PfReport> pf_monte_carlo_trajectory(Alpha alpha, const CauchyParams& p, std::size_t n,
                                                                     std::size_t steps, std::uint64_t seed,
                                                                     FitMethod method = FitMethod::median_iqr,
                                                                     unsigned workers = 0) {
    detail::require_monte_carlo_size(n);
    std::vector<double> points(n);
    fill_cauchy(points, p, seed, workers);
    std::vector<PfReport> out;
    out.reserve(steps + 1);
    std::size_t dropped = 0;
    HPoint x = HPoint::interior(p.nu, p.gamma);
    out.push_back(detail::summarize_fit(alpha, p, x, points, 0, 0, method));
    for (std::size_t s = 1; s <= steps; ++s) {
        dropped += detail::advance_points(points, alpha, workers);
        x = parameter_step(alpha, x);
        out.push_back(detail::summarize_fit(alpha, p, x, points, s, dropped, method));
    }
    return out;
}

struct RateReport {
    std::size_t n = 0;
    double rms_error_n = 0.0;   ///< RMS over seeds, replicates and both parameters at size n
    double rms_error_2n = 0.0;  ///< same at size 2n
    double ratio = 0.0;         ///< rms_error_n / rms_error_2n, sqrt(2) for an n^{-1/2} rate
};

/// Compares one-step Monte Carlo fit errors at sizes n and 2n over `seeds` x `replicates`
/// independent batches; every batch seed is derived from (base_seed, seed index, replicate).
[[nodiscard]] inline RateReport monte_carlo_rate_check(Alpha alpha, const CauchyParams& p, std::size_t n,
                                                       std::uint64_t base_seed, std::size_t seeds = 10,
                                                       std::size_t replicates = 20, unsigned workers = 0) {
    const std::size_t total = seeds * replicates;
    std::vector<double> sq_small(total), sq_large(total);
    parallel_for(
        total,
        [&](std::size_t k) {
            const std::uint64_t s = splitmix64(base_seed + splitmix64(k / replicates)) ^ splitmix64(k % replicates + 1);
            const PfReport small = pf_monte_carlo_check(alpha, p, n, 1, s, FitMethod::median_iqr, 1);
            const PfReport large = pf_monte_carlo_check(alpha, p, 2 * n, 1, s ^ 0x5bd1e995ULL, FitMethod::median_iqr, 1);
            auto sq = [](const PfReport& r) {
                const double dn = r.measured.nu - r.predicted.nu;
                const double dg = r.measured.gamma - r.predicted.gamma;
                return dn * dn + dg * dg;
            };
            sq_small[k] = sq(small);
            sq_large[k] = sq(large);
        },
        workers);
    RateReport r;
    r.n = n;
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
        a += sq_small[k];
        b += sq_large[k];
    }
    r.rms_error_n = std::sqrt(a / (2.0 * static_cast<double>(total)));
    r.rms_error_2n = std::sqrt(b / (2.0 * static_cast<double>(total)));
    r.ratio = r.rms_error_n / r.rms_error_2n;
    return r;
}

struct ErgodicReport {
    double ks = 0.0;
    std::size_t n = 0;
    std::size_t distinct = 0;
    bool degenerate = false; ///< fewer than n/2 distinct states: eventually periodic at machine precision
    CauchyParams invariant;
};

/// Kolmogorov-Smirnov distance between an empirical sample and a Cauchy CDF. Sorts `sample`.
[[nodiscard]] inline double ks_distance(std::vector<double>& sample, const CauchyParams& p) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cauchy_cdf(p, sample[i]);
        d = std::fmax(d, std::fmax(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
    }
    return d;
}

/// Runs n steps of F_a from xi0 and measures the KS distance of x_1..x_n to C(0, sqrt(a/(1-a))).
[[nodiscard]] inline ErgodicReport ergodic_orbit_check(Alpha alpha, OrbitState xi0, std::size_t n) {
    if (n < 100'000) throw invalid_parameter("ergodic_orbit_check needs n >= 1e5");
    OrbitTrace trace = iterate_orbit(alpha, xi0, n);
    if (trace.truncated) {
        std::ostringstream os;
        os << "orbit reached the pole at index " << trace.last_valid_index;
        throw orbit_truncated(os.str(), trace.last_valid_index);
    }
    ErgodicReport r;
    r.n = n;
    r.invariant = {0.0, invariant_scale(alpha)};
    std::vector<double> sample(trace.states.begin() + 1, trace.states.end());
    r.ks = ks_distance(sample, r.invariant);
    r.distinct = static_cast<std::size_t>(std::unique(sample.begin(), sample.end()) - sample.begin());
    r.degenerate = r.distinct < n / 2;
    return r;
}

} // namespace boolemap
