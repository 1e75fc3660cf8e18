#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aed::objective {

/// Experiment-cost-penalized reward: mean reward minus w * ln(T).
double ecp(std::int64_t horizon, double mean_reward, double w);

/// Same score written on cumulative reward R over a continuous horizon.
double ecp_cumulative(double horizon, double cumulative_reward, double w);

/// The naive linear alternative R - w T on cumulative reward.
double linear_objective(double horizon, double cumulative_reward, double w);

struct PropertyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;
    bool passed() const;
};

/// Randomized verification of the objective's defining properties:
/// iso-value PDE residual, monotonicity, invariance of design orderings
/// under reward location and scale shifts, and the counterexample where the
/// linear objective prefers a dominated design.
PropertyReport ecp_property_suite(std::uint64_t seed = 1, std::int64_t points = 10000);

}  // namespace aed::objective
