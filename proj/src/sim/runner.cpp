#include "aed/sim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aed::sim {

std::string_view to_string(RunnerMode mode) {
    return mode == RunnerMode::Exact ? "exact" : "batched";
}

RunnerMode runner_mode_from_string(std::string_view name) {
    if (name == "exact") return RunnerMode::Exact;
    if (name == "batched") return RunnerMode::Batched;
    throw std::invalid_argument("unknown runner mode '" + std::string(name) + "'");
}

double round_half_even(double x) {
    const double r = std::round(x);
    if (std::fabs(x - std::trunc(x)) == 0.5) {
        return 2.0 * std::round(x / 2.0);
    }
    return r;
}

BatchSchedule batch_schedule(std::int64_t t) {
    if (t < 0) throw std::invalid_argument("batch_schedule needs t >= 0");
    BatchSchedule b;
    b.step_size = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(round_half_even(1.0 + 0.05 * static_cast<double>(t))));
    b.actions = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(round_half_even(std::cbrt(static_cast<double>(b.step_size)))));
    b.reps_per_action = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(round_half_even(static_cast<double>(b.step_size) /
                                                     static_cast<double>(b.actions))));
    return b;
}

std::vector<std::int64_t> checkpoints(RunnerMode mode, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    std::vector<std::int64_t> out;
    if (mode == RunnerMode::Exact) {
        out.resize(static_cast<std::size_t>(horizon));
        for (std::int64_t t = 0; t < horizon; ++t) out[static_cast<std::size_t>(t)] = t + 1;
        return out;
    }
    std::int64_t t = 0;
    while (t < horizon) {
        const BatchSchedule b = batch_schedule(t);
        for (std::int64_t i = 0; i < b.actions; ++i) {
            t += b.reps_per_action;
            out.push_back(t);
        }
    }
    return out;
}

std::vector<std::int32_t> step_to_checkpoint(std::span<const std::int64_t> cps,
                                             std::int64_t horizon) {
    std::vector<std::int32_t> out(static_cast<std::size_t>(horizon), -1);
    std::size_t c = 0;
    std::int32_t last = -1;
    for (std::int64_t t = 1; t <= horizon; ++t) {
        while (c < cps.size() && cps[c] <= t) last = static_cast<std::int32_t>(c++);
        out[static_cast<std::size_t>(t - 1)] = last;
    }
    return out;
}

CompressedHistory run_exact(const ArmVector& arms, std::int64_t horizon, const Policy& policy,
                            Rng& rng) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    CompressedHistory h;
    h.arms = arms.size();
    h.entries.reserve(static_cast<std::size_t>(horizon));
    PolicyState state(arms.size());
    for (std::int64_t t = 0; t < horizon; ++t) {
        const int a = policy.select(state, rng);
        const double r = arms[a].sample(rng);
        state.record(a, r, r * r, 1);
        h.append({a, r, r * r, 1});
    }
    return h;
}

CompressedHistory run_batched(const ArmVector& arms, std::int64_t horizon, const Policy& policy,
                              Rng& rng) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    CompressedHistory h;
    h.arms = arms.size();
    PolicyState state(arms.size());
    std::vector<int> chosen;
    while (h.horizon_reached < horizon) {
        const BatchSchedule b = batch_schedule(h.horizon_reached);
        chosen.clear();
        for (std::int64_t i = 0; i < b.actions; ++i) chosen.push_back(policy.select(state, rng));
        const std::size_t first = h.entries.size();
        for (int a : chosen) {
            const RewardAggregate agg =
                arms[a].sample_aggregate(static_cast<int>(b.reps_per_action), rng);
            h.append({a, agg.sum, agg.sq_sum, b.reps_per_action});
        }
        for (std::size_t i = first; i < h.entries.size(); ++i) {
            const auto& e = h.entries[i];
            state.record(e.arm, e.reward_sum, e.reward_sq_sum, e.draws);
        }
    }
    return h;
}

CompressedHistory run(RunnerMode mode, const ArmVector& arms, std::int64_t horizon,
                      const Policy& policy, Rng& rng) {
    return mode == RunnerMode::Exact ? run_exact(arms, horizon, policy, rng)
                                     : run_batched(arms, horizon, policy, rng);
}

CompressedHistory run_with_rewards(int arms, std::span<const double> rewards,
                                   const Policy& policy, Rng& rng) {
    CompressedHistory h;
    h.arms = arms;
    h.entries.reserve(rewards.size());
    PolicyState state(arms);
    for (double r : rewards) {
        const int a = policy.select(state, rng);
        state.record(a, r, r * r, 1);
        h.append({a, r, r * r, 1});
    }
    return h;
}

}  // namespace aed::sim
