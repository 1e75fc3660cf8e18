#pragma once

#include <cstdint>
#include <span>

#include "aed/sim/parallel.hpp"
#include "aed/sim/policy.hpp"
#include "aed/sim/reward.hpp"
#include "aed/stats/tests.hpp"

namespace aed::calibration {

/// Level-alpha test at a single horizon with a randomized boundary: reject
/// with probability 1 above `threshold` and `gamma` exactly at it.
struct RandomizedThreshold {
    double threshold = 0.0;
    double gamma = 0.0;

    double reject_probability(double oriented_value) const;
};

/// Chooses (threshold, gamma) so that the empirical rejection rate on
/// `null_values` is exactly alpha.  -inf entries stand for Undefined.
RandomizedThreshold randomized_threshold(std::span<const double> null_values, double alpha);

struct LrtCheckResult {
    double lrt_fpr = 0.0;
    double lrt_power = 0.0;
    double competitor_fpr = 0.0;
    double competitor_power = 0.0;
    double tolerance = 0.02;
    std::int64_t reps = 0;

    bool passes() const { return lrt_power >= competitor_power - tolerance; }
};

/// Simple null versus simple alternative at horizon T.  Both the likelihood
/// ratio and `competitor` are calibrated on `reps` null runs of `policy`,
/// then their rejection rates are measured on fresh null and alternative
/// runs.  Rates use the expected rejection probability of each run, which
/// removes the boundary coin from the Monte Carlo noise.
LrtCheckResult lrt_most_powerful_check(const sim::ArmVector& null, const sim::ArmVector& alt,
                                       std::int64_t horizon, const sim::Policy& policy,
                                       const stats::TestSpec& competitor, double alpha,
                                       std::int64_t reps, std::uint64_t seed,
                                       const sim::Execution& exec = {});

}  // namespace aed::calibration
