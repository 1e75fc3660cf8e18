#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "aed/calibration/null_estimate.hpp"
#include "aed/sim/parallel.hpp"
#include "aed/sim/policy.hpp"
#include "aed/sim/runner.hpp"
#include "aed/stats/tests.hpp"

namespace aed::calibration {

enum class Sided { RightTail, AbsTwoSided };

/// Per-step rejection thresholds q_1..q_T.  Rejection at t means the
/// oriented statistic (identity or |.|) is strictly greater than q_t.
struct CriticalSchedule {
    std::vector<double> thresholds;
    Sided sided = Sided::RightTail;
    double alpha = 0.05;
    std::int64_t reps_used = 0;

    std::int64_t horizon() const { return static_cast<std::int64_t>(thresholds.size()); }
    double at(std::int64_t t) const { return thresholds.at(static_cast<std::size_t>(t - 1)); }
    bool rejects(std::int64_t t, const std::optional<double>& statistic) const;
};

/// Writes "t,q_t" rows with a leading comment line carrying the metadata.
void write_csv(std::ostream& os, const CriticalSchedule& schedule);

/// Order statistic of rank ceil((1 - alpha) n) of `values` (reordered in
/// place).  -inf entries stand for Undefined; when the selected order
/// statistic is one of them the threshold is +inf (no rejection possible).
double upper_quantile(std::span<double> values, double alpha);

/// Thresholds at each checkpoint (entry boundary <= horizon) from `reps`
/// simulations with every arm drawn from the null kernel.
struct CheckpointSchedule {
    std::vector<std::int64_t> checkpoints;
    std::vector<double> thresholds;
};

struct NullRunSpec {
    sim::ArmVector null_arms;
    std::int64_t horizon = 0;
    sim::Policy policy;
    stats::TestSpec spec;
    sim::RunnerMode mode = sim::RunnerMode::Batched;
};

/// Oriented calibration values of every null replication at every checkpoint,
/// laid out [rep][checkpoint][value].
struct NullSample {
    std::vector<std::int64_t> checkpoints;
    std::size_t values_per_checkpoint = 0;
    std::int64_t reps = 0;
    std::vector<double> values;

    std::span<const double> at(std::int64_t rep, std::size_t checkpoint) const;
};

NullSample simulate_null(const NullRunSpec& run, std::int64_t reps, std::uint64_t seed,
                         const sim::Execution& exec = {});

CheckpointSchedule thresholds_from_sample(const NullSample& sample, double alpha);

CheckpointSchedule calibrate_checkpoints(const NullRunSpec& run, double alpha, std::int64_t reps,
                                         std::uint64_t seed, const sim::Execution& exec = {});

/// Expands checkpoint thresholds to every step 1..horizon.
std::vector<double> expand_to_steps(const CheckpointSchedule& cs, std::int64_t horizon);

/// Algorithm-induced test correction: simulate the policy under the shared
/// null and take the empirical (1 - alpha) quantile of the statistic per step.
CriticalSchedule ait_calibrate(int arms, std::int64_t horizon, const NullEstimate& null,
                               const stats::TestSpec& spec, const sim::Policy& policy,
                               double alpha, std::int64_t reps, std::uint64_t seed,
                               sim::RunnerMode mode = sim::RunnerMode::Batched,
                               const sim::Execution& exec = {});

}  // namespace aed::calibration
