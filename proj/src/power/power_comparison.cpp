#include "aed/power/power_comparison.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "aed/calibration/art.hpp"
#include "aed/power/power_analysis.hpp"
#include "aed/sim/rng.hpp"
#include "aed/sim/runner.hpp"

namespace aed::power {

double art_rejection_rate(const sim::Policy& policy, const stats::TestSpec& spec,
                          const std::vector<double>& means, std::int64_t horizon, double alpha,
                          std::int64_t reps, std::int64_t resamples, std::uint64_t seed,
                          const sim::Execution& exec) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    const auto arms = sim::ArmVector::bernoulli(means);
    std::vector<char> rejected(static_cast<std::size_t>(reps), 0);
    sim::parallel_for(static_cast<std::size_t>(reps), exec, [&](std::size_t r) {
        sim::Rng rng = sim::derive_stream(seed, r, sim::StageTag::kExperiment);
        const auto h = sim::run_exact(arms, horizon, policy, rng);
        sim::Rng resample_rng = sim::derive_stream(seed, r, sim::StageTag::kResample);
        rejected[r] = calibration::art_pvalue(h, spec, policy, resamples, resample_rng) <= alpha;
    });
    std::int64_t n = 0;
    for (char c : rejected) n += c;
    return static_cast<double>(n) / static_cast<double>(reps);
}

std::vector<ComparisonRow> power_comparison(const ComparisonConfig& cfg,
                                            const sim::Execution& exec) {
    if (cfg.policies.empty()) throw std::invalid_argument("no policies to compare");
    std::vector<ComparisonRow> rows;
    for (std::size_t i = 0; i < cfg.policies.size(); ++i) {
        const auto& policy = cfg.policies[i];
        auto leg_seed = [&](std::uint32_t leg) {
            return sim::derive_seed(cfg.seed, i * 4 + leg,
                                    static_cast<std::uint32_t>(sim::StageTag::kExperiment));
        };
        PowerConfig pc;
        pc.prior = PriorSpec::fixed_bernoulli(cfg.alt_means);
        pc.horizon = cfg.horizon;
        pc.policy = policy;
        pc.spec = cfg.spec;
        pc.spec.min_effect = 0.0;
        pc.alpha = cfg.alpha;
        pc.reps = cfg.reps;
        pc.grid_points = cfg.grid_points;
        pc.mode = sim::RunnerMode::Exact;

        const std::int64_t art_reps = cfg.art_reps > 0 ? cfg.art_reps : cfg.reps;
        ComparisonRow row;
        row.policy = policy;
        pc.seed = leg_seed(0);
        row.ait_power = power_analysis(pc, exec).power(cfg.horizon);
        pc.seed = leg_seed(1);
        row.ait_fpr = fpr_analysis(pc, cfg.null_means, exec);
        row.art_power = art_rejection_rate(policy, cfg.spec, cfg.alt_means, cfg.horizon,
                                           cfg.alpha, art_reps, cfg.art_resamples, leg_seed(2),
                                           exec);
        row.art_fpr = art_rejection_rate(policy, cfg.spec, cfg.null_means, cfg.horizon,
                                         cfg.alpha, art_reps, cfg.art_resamples, leg_seed(3),
                                         exec);
        rows.push_back(row);
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "policy,art_power,ait_power,art_fpr,ait_fpr\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f,%.4f,%.4f\n", r.policy.label().c_str(),
                      r.art_power, r.ait_power, r.art_fpr, r.ait_fpr);
        os << buf;
    }
}

}  // namespace aed::power
