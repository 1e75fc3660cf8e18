#include "aed/calibration/art.hpp"

#include <stdexcept>
#include <vector>

#include "aed/sim/runner.hpp"
#include "aed/stats/summaries.hpp"

namespace aed::calibration {

double art_pvalue(const sim::CompressedHistory& observed, const stats::TestSpec& spec,
                  const sim::Policy& policy, std::int64_t resamples, sim::Rng& rng) {
    if (resamples < 1) throw std::invalid_argument("ART needs at least one resample");
    std::vector<double> rewards;
    rewards.reserve(observed.entries.size());
    for (const auto& e : observed.entries) {
        if (e.draws != 1) throw std::invalid_argument("ART operates on exact histories only");
        rewards.push_back(e.reward_sum);
    }
    const auto horizon = observed.horizon_reached;
    const auto obs_stat = stats::evaluate(spec, stats::arm_totals(observed, horizon));
    if (!obs_stat.value) return 1.0;
    // Every resample of a deterministic policy reproduces the observed
    // history, so all M statistics tie and p = U exactly.
    if (policy.deterministic()) return sim::uniform01(rng);
    const double obs = stats::oriented(spec, obs_stat.value);

    std::int64_t greater = 0;
    std::int64_t ties = 0;
    stats::StatValue stat;
    for (std::int64_t b = 0; b < resamples; ++b) {
        const auto h = sim::run_with_rewards(observed.arms, rewards, policy, rng);
        stats::evaluate(spec, h.replay().totals(), stat);
        const double v = stats::oriented(spec, stat.value);
        if (v > obs) {
            ++greater;
        } else if (v == obs) {
            ++ties;
        }
    }
    const double u = sim::uniform01(rng);
    return (static_cast<double>(greater) + u * static_cast<double>(ties + 1)) /
           static_cast<double>(resamples + 1);
}

}  // namespace aed::calibration
