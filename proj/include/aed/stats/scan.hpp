#pragma once

#include <cstdint>
#include <vector>

#include "aed/sim/history.hpp"
#include "aed/stats/tests.hpp"

namespace aed::stats {

/// Walks a history entry by entry and evaluates `spec` after every entry that
/// completes at or before `horizon`.  fn(checkpoint_index, cumulative_draws,
/// totals, stat) sees the running per-arm totals.
template <class Fn>
void scan_checkpoints(const sim::CompressedHistory& history, std::int64_t horizon,
                      const TestSpec& spec, Fn&& fn) {
    std::vector<sim::ArmTotals> totals(static_cast<std::size_t>(history.arms));
    StatValue stat;
    std::int64_t cum = 0;
    for (std::size_t i = 0; i < history.entries.size(); ++i) {
        const auto& e = history.entries[i];
        if (cum + e.draws > horizon) break;
        cum += e.draws;
        auto& a = totals[static_cast<std::size_t>(e.arm)];
        a.pulls += e.draws;
        a.reward_sum += e.reward_sum;
        a.reward_sq_sum += e.reward_sq_sum;
        evaluate(spec, totals, stat);
        fn(i, cum, static_cast<const std::vector<sim::ArmTotals>&>(totals),
           static_cast<const StatValue&>(stat));
    }
}

}  // namespace aed::stats
