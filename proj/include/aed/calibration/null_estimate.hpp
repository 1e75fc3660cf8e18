#pragma once

#include "aed/sim/history.hpp"
#include "aed/sim/reward.hpp"

namespace aed::calibration {

inline constexpr double kGaussianScaleFloor = 1e-6;

/// Common null reward distribution under the equal-arms assumption.
/// `theta` is the scalar used for grid binning (the kernel mean).
struct NullEstimate {
    sim::RewardKernel kernel;
    double theta = 0.0;
};

/// Pooled maximum-likelihood estimate over every draw in the history.
/// Gaussian scale is the pooled sample standard deviation, floored.
NullEstimate estimate_null(const sim::CompressedHistory& history, sim::RewardKind kind);

/// Same estimate from pooled sufficient statistics.
NullEstimate estimate_null(double n, double reward_sum, double reward_sq_sum,
                           sim::RewardKind kind);

}  // namespace aed::calibration
