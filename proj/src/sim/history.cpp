#include "aed/sim/history.hpp"

#include <stdexcept>

namespace aed::sim {

PolicyState::PolicyState(int arms) : totals_(static_cast<std::size_t>(arms)) {
    if (arms < 1) throw std::invalid_argument("PolicyState needs at least one arm");
}

void PolicyState::record(int arm, double reward_sum, double reward_sq_sum,
                         std::int64_t draws) {
    auto& a = totals_.at(static_cast<std::size_t>(arm));
    a.pulls += draws;
    a.reward_sum += reward_sum;
    a.reward_sq_sum += reward_sq_sum;
    total_t_ += draws;
}

PolicyState CompressedHistory::replay() const {
    PolicyState state(arms);
    for (const auto& e : entries) state.record(e.arm, e.reward_sum, e.reward_sq_sum, e.draws);
    return state;
}

std::size_t CompressedHistory::entries_within(std::int64_t t) const {
    std::int64_t cum = 0;
    std::size_t i = 0;
    for (; i < entries.size(); ++i) {
        if (cum + entries[i].draws > t) break;
        cum += entries[i].draws;
    }
    return i;
}

double CompressedHistory::cumulative_reward(std::int64_t t) const {
    std::int64_t cum = 0;
    double total = 0.0;
    for (const auto& e : entries) {
        if (cum + e.draws <= t) {
            total += e.reward_sum;
            cum += e.draws;
            continue;
        }
        if (cum < t) {
            total += e.reward_sum * static_cast<double>(t - cum) / static_cast<double>(e.draws);
        }
        break;
    }
    return total;
}

}  // namespace aed::sim
