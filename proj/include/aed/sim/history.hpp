#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace aed::sim {

/// Running sufficient statistics for one arm.  `pulls` counts reward draws.
struct ArmTotals {
    std::int64_t pulls = 0;
    double reward_sum = 0.0;
    double reward_sq_sum = 0.0;

    friend bool operator==(const ArmTotals&, const ArmTotals&) = default;
};

/// What a policy conditions on: per-arm totals plus the global step count.
class PolicyState {
public:
    explicit PolicyState(int arms);

    int arms() const { return static_cast<int>(totals_.size()); }
    std::int64_t total_t() const { return total_t_; }
    const ArmTotals& operator[](int arm) const { return totals_[static_cast<std::size_t>(arm)]; }
    std::span<const ArmTotals> totals() const { return totals_; }

    void record(int arm, double reward_sum, double reward_sq_sum, std::int64_t draws);

    friend bool operator==(const PolicyState&, const PolicyState&) = default;

private:
    std::vector<ArmTotals> totals_;
    std::int64_t total_t_ = 0;
};

/// One batched action: `draws` rewards on `arm`, aggregated.
struct HistoryEntry {
    int arm = 0;
    double reward_sum = 0.0;
    double reward_sq_sum = 0.0;
    std::int64_t draws = 1;

    friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

/// Experiment record in compressed form.  Exact runs have draws == 1 in every
/// entry; batched runs aggregate.  `horizon_reached` equals the draw total.
struct CompressedHistory {
    int arms = 0;
    std::vector<HistoryEntry> entries;
    std::int64_t horizon_reached = 0;

    void append(const HistoryEntry& e) {
        entries.push_back(e);
        horizon_reached += e.draws;
    }

    /// Replays every entry into a fresh PolicyState.
    PolicyState replay() const;

    /// Number of leading entries whose cumulative draw count is <= t.
    std::size_t entries_within(std::int64_t t) const;

    /// Pooled reward total over the first t steps.  A straddling final entry
    /// contributes proportionally to the part of it that falls before t.
    double cumulative_reward(std::int64_t t) const;

    friend bool operator==(const CompressedHistory&, const CompressedHistory&) = default;
};

}  // namespace aed::sim
