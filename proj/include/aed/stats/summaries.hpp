#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aed/sim/history.hpp"

namespace aed::stats {

/// Moments of one arm reconstructed from (n, sum R, sum R^2).
struct ArmSummary {
    std::int64_t n = 0;
    std::optional<double> mean;
    std::optional<double> variance;  // unbiased; needs n >= 2
};

ArmSummary summarize(const sim::ArmTotals& totals);

/// Per-arm summaries over the entries completed by step t (the last entry
/// whose cumulative draw count is <= t).
std::vector<ArmSummary> arm_summaries(const sim::CompressedHistory& history, std::int64_t t);

/// Per-arm totals over the entries completed by step t.
std::vector<sim::ArmTotals> arm_totals(const sim::CompressedHistory& history, std::int64_t t);

}  // namespace aed::stats
