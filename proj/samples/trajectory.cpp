// Follows a Cauchy density under repeated Boole-transform steps, then checks the
// first step against a Monte Carlo push-forward.

#include "boolemap/geometry.hpp"
#include "boolemap/parameter_map.hpp"
#include "boolemap/pf_verifier.hpp"

#include <cstdio>

int main() {
    using namespace boolemap;
    const Alpha alpha(0.7);
    const HPoint start = HPoint::interior(3.0, 0.5);
    const HPoint target = fixed_point(alpha);

    std::printf("%4s %12s %12s %12s %12s\n", "n", "nu", "gamma", "factor", "d_fisher");
    const auto traj = parameter_trajectory(alpha, start, 12);
    for (std::size_t k = 0; k < traj.size(); ++k)
        std::printf("%4zu %12.8f %12.8f %12.8f %12.3e\n", k, traj[k].nu(), traj[k].gamma(), conformal_factor(traj[k]),
                    fisher_distance(traj[k], target));

    const PfReport mc = pf_monte_carlo_check(alpha, start.cauchy(), 200'000, 1, 7);
    std::printf("one step: predicted (%.5f, %.5f), fitted (%.5f, %.5f), %.2f standard errors\n", mc.predicted.nu,
                mc.predicted.gamma, mc.measured.nu, mc.measured.gamma, mc.sup_error / mc.standard_error);
    std::printf("grid check sup error: %.3e\n", pf_closed_form_check(alpha, start.cauchy(), default_grid(start.cauchy())));
}
