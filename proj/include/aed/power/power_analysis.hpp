#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "aed/calibration/ait.hpp"
#include "aed/power/prior.hpp"
#include "aed/sim/parallel.hpp"
#include "aed/sim/policy.hpp"
#include "aed/sim/runner.hpp"
#include "aed/stats/tests.hpp"

namespace aed::power {

/// Where rejection thresholds come from.
///   AitGrid: per-replication null estimate, thresholds interpolated between
///     B equally spaced calibrated grid points.
///   Classical: the uncorrected large-sample threshold.
///   FixedSchedule: a caller-supplied per-step schedule.
enum class ThresholdSource { AitGrid, Classical, FixedSchedule };

std::string_view to_string(ThresholdSource s);
ThresholdSource threshold_source_from_string(std::string_view name);

struct PowerConfig {
    PriorSpec prior;
    std::int64_t horizon = 200;
    sim::Policy policy;
    stats::TestSpec spec;
    double alpha = 0.05;
    std::int64_t reps = 10000;        // M
    int grid_points = 10;             // B
    std::int64_t calibration_reps = 0;  // per grid point; 0 = max(100, M / B)
    sim::RunnerMode mode = sim::RunnerMode::Batched;
    ThresholdSource thresholds = ThresholdSource::AitGrid;
    calibration::CriticalSchedule schedule;  // FixedSchedule only
    std::uint64_t seed = 0;

    void validate() const;
    std::int64_t resolved_calibration_reps() const;
};

struct PowerCurve {
    std::vector<double> beta;         // Type-II error at t = 1..T
    std::vector<double> mean_reward;  // r-bar at t = 1..T
    std::int64_t eligible = 0;        // rejection events passing the d0 filter
    std::int64_t eligible_reps = 0;   // replications with at least one such event
    std::int64_t reps = 0;
    std::vector<double> grid;         // calibrated null parameters (AitGrid)
    std::optional<double> fpr_estimate;

    std::int64_t horizon() const { return static_cast<std::int64_t>(beta.size()); }
    double power(std::int64_t t) const { return 1.0 - beta.at(static_cast<std::size_t>(t - 1)); }
    /// Smallest t with beta_t <= beta0, if any.
    std::optional<std::int64_t> min_horizon(double beta0) const;
};

/// Writes "t,beta,mean_reward" rows.
void write_csv(std::ostream& os, const PowerCurve& curve);

/// Monte-Carlo power analysis: M replications draw arm means from the prior,
/// run the policy, and test at every step against null-calibrated thresholds.
/// Throws std::runtime_error("prior incompatible with minimum effect") when no
/// replication yields an eligible rejection event.
PowerCurve power_analysis(const PowerConfig& config, const sim::Execution& exec = {});

/// Rejection rate at the horizon with every arm at `null_means`.
double fpr_analysis(PowerConfig config, const std::vector<double>& null_means,
                    const sim::Execution& exec = {});

/// Work units reported to the progress hook by one power_analysis call.
std::size_t power_analysis_work(const PowerConfig& config);

/// Threshold of one replication between two bracketing grid schedules.  The
/// weight is clamped to [0, 1]; weight 0 (or 1) returns the bracket exactly.
double interpolate_threshold(double lo, double hi, double weight);

}  // namespace aed::power
