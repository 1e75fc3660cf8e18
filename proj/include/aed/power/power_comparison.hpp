#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "aed/sim/parallel.hpp"
#include "aed/sim/policy.hpp"
#include "aed/stats/tests.hpp"

namespace aed::power {

struct ComparisonConfig {
    std::vector<sim::Policy> policies;
    stats::TestSpec spec;
    std::vector<double> alt_means{0.6, 0.4};
    std::vector<double> null_means{0.5, 0.5};
    std::int64_t horizon = 200;
    double alpha = 0.05;
    std::int64_t reps = 10000;
    std::int64_t art_reps = 0;  // 0 = reps
    std::int64_t art_resamples = 99;
    int grid_points = 10;
    std::uint64_t seed = 0;
};

struct ComparisonRow {
    sim::Policy policy;
    double art_power = 0.0;
    double ait_power = 0.0;
    double art_fpr = 0.0;
    double ait_fpr = 0.0;
};

/// AIT against ART on exact Bernoulli histories at the horizon.  AIT legs
/// estimate the null per replication and use grid-calibrated thresholds;
/// ART legs re-run the policy on the observed reward sequence.
std::vector<ComparisonRow> power_comparison(const ComparisonConfig& config,
                                            const sim::Execution& exec = {});

/// Rejection rate of ART at level alpha over `reps` exact runs under `means`.
double art_rejection_rate(const sim::Policy& policy, const stats::TestSpec& spec,
                          const std::vector<double>& means, std::int64_t horizon, double alpha,
                          std::int64_t reps, std::int64_t resamples, std::uint64_t seed,
                          const sim::Execution& exec = {});

/// Writes "policy,art_power,ait_power,art_fpr,ait_fpr" rows.
void write_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

}  // namespace aed::power
