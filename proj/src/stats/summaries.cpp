#include "aed/stats/summaries.hpp"

#include <algorithm>
#include <stdexcept>

namespace aed::stats {

ArmSummary summarize(const sim::ArmTotals& totals) {
    ArmSummary s;
    s.n = totals.pulls;
    if (s.n == 0) return s;
    const double n = static_cast<double>(s.n);
    const double mean = totals.reward_sum / n;
    s.mean = mean;
    if (s.n >= 2) {
        // Clamp cancellation noise; the true value is a sum of squares.
        s.variance = std::max(0.0, (totals.reward_sq_sum - n * mean * mean) / (n - 1.0));
    }
    return s;
}

std::vector<sim::ArmTotals> arm_totals(const sim::CompressedHistory& history, std::int64_t t) {
    if (t > history.horizon_reached) {
        throw std::invalid_argument("t exceeds the horizon reached by the history");
    }
    std::vector<sim::ArmTotals> totals(static_cast<std::size_t>(history.arms));
    const std::size_t upto = history.entries_within(t);
    for (std::size_t i = 0; i < upto; ++i) {
        const auto& e = history.entries[i];
        auto& a = totals[static_cast<std::size_t>(e.arm)];
        a.pulls += e.draws;
        a.reward_sum += e.reward_sum;
        a.reward_sq_sum += e.reward_sq_sum;
    }
    return totals;
}

std::vector<ArmSummary> arm_summaries(const sim::CompressedHistory& history, std::int64_t t) {
    const auto totals = arm_totals(history, t);
    std::vector<ArmSummary> out;
    out.reserve(totals.size());
    for (const auto& a : totals) out.push_back(summarize(a));
    return out;
}

}  // namespace aed::stats
