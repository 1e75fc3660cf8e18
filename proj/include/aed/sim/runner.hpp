#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aed/sim/history.hpp"
#include "aed/sim/policy.hpp"
#include "aed/sim/reward.hpp"
#include "aed/sim/rng.hpp"

namespace aed::sim {

enum class RunnerMode { Exact, Batched };

std::string_view to_string(RunnerMode mode);
RunnerMode runner_mode_from_string(std::string_view name);

struct BatchSchedule {
    std::int64_t step_size = 1;        // s_t
    std::int64_t actions = 1;          // n_t
    std::int64_t reps_per_action = 1;  // m

    std::int64_t draws() const { return actions * reps_per_action; }
    friend bool operator==(const BatchSchedule&, const BatchSchedule&) = default;
};

/// Round half to even.
double round_half_even(double x);

/// s_t = round(1 + 0.05 t), n_t = round(s_t^(1/3)), m = max(1, round(s_t / n_t)).
BatchSchedule batch_schedule(std::int64_t t);

/// Cumulative draw counts after each entry of a run to horizon T.  Entry
/// boundaries of both runners depend only on T, never on the random stream,
/// so every replication of a configuration shares these checkpoints.
std::vector<std::int64_t> checkpoints(RunnerMode mode, std::int64_t horizon);

/// Maps every step t in 1..T to the index of the last checkpoint <= t.
std::vector<std::int32_t> step_to_checkpoint(std::span<const std::int64_t> checkpoints,
                                             std::int64_t horizon);

/// One reward per step, policy updated after every draw.
CompressedHistory run_exact(const ArmVector& arms, std::int64_t horizon, const Policy& policy,
                            Rng& rng);

/// Geometrically growing batches; selections within a batch see the state
/// frozen at the batch start.  The final batch may overshoot the horizon.
CompressedHistory run_batched(const ArmVector& arms, std::int64_t horizon, const Policy& policy,
                              Rng& rng);

CompressedHistory run(RunnerMode mode, const ArmVector& arms, std::int64_t horizon,
                      const Policy& policy, Rng& rng);

/// Re-runs the policy's arm selection while feeding the fixed time-indexed
/// reward sequence, whatever arm is chosen.  Used by the randomization test.
CompressedHistory run_with_rewards(int arms, std::span<const double> rewards,
                                   const Policy& policy, Rng& rng);

}  // namespace aed::sim
