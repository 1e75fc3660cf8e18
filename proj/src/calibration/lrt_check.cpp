#include "aed/calibration/lrt_check.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "aed/sim/rng.hpp"
#include "aed/sim/runner.hpp"

namespace aed::calibration {
namespace {

struct PairValues {
    std::vector<double> lrt;
    std::vector<double> comp;
};

PairValues simulate_pair(const sim::ArmVector& arms, std::int64_t horizon,
                         const sim::Policy& policy, const stats::TestSpec& lrt,
                         const stats::TestSpec& comp, std::int64_t reps, std::uint64_t seed,
                         std::uint32_t stream, const sim::Execution& exec) {
    PairValues out;
    out.lrt.resize(static_cast<std::size_t>(reps));
    out.comp.resize(static_cast<std::size_t>(reps));
    const std::uint64_t base = sim::derive_seed(seed, stream, static_cast<std::uint32_t>(sim::StageTag::kCalibration));
    sim::parallel_for(static_cast<std::size_t>(reps), exec, [&](std::size_t r) {
        sim::Rng rng = sim::derive_stream(base, r, sim::StageTag::kExperiment);
        const auto h = sim::run_exact(arms, horizon, policy, rng);
        const auto totals = h.replay();
        out.lrt[r] = stats::oriented(lrt, stats::evaluate(lrt, totals.totals()).value);
        out.comp[r] = stats::oriented(comp, stats::evaluate(comp, totals.totals()).value);
    });
    return out;
}

double mean_rejection(const RandomizedThreshold& rt, std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += rt.reject_probability(v);
    return s / static_cast<double>(values.size());
}

}  // namespace

double RandomizedThreshold::reject_probability(double v) const {
    if (v > threshold) return 1.0;
    if (v == threshold) return gamma;
    return 0.0;
}

RandomizedThreshold randomized_threshold(std::span<const double> null_values, double alpha) {
    if (null_values.empty()) throw std::invalid_argument("randomized threshold of an empty sample");
    std::vector<double> v(null_values.begin(), null_values.end());
    std::sort(v.begin(), v.end(), std::greater<>());
    const double n = static_cast<double>(v.size());
    const auto k = static_cast<std::size_t>(std::clamp(alpha * n, 0.0, n - 1.0));
    RandomizedThreshold rt;
    rt.threshold = v[k];
    const auto above = static_cast<double>(
        std::count_if(v.begin(), v.end(), [&](double x) { return x > rt.threshold; }));
    const auto at = static_cast<double>(std::count(v.begin(), v.end(), rt.threshold));
    rt.gamma = std::clamp((alpha * n - above) / at, 0.0, 1.0);
    return rt;
}

LrtCheckResult lrt_most_powerful_check(const sim::ArmVector& null, const sim::ArmVector& alt,
                                       std::int64_t horizon, const sim::Policy& policy,
                                       const stats::TestSpec& competitor, double alpha,
                                       std::int64_t reps, std::uint64_t seed,
                                       const sim::Execution& exec) {
    if (null.size() != alt.size()) throw std::invalid_argument("null and alternative differ in K");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (reps < 100) throw std::invalid_argument("LRT check needs at least 100 replications");
    if (horizon < 2) throw std::invalid_argument("horizon must be >= 2");
    const auto lrt = stats::TestSpec::lrt(null, alt);
    competitor.validate(null.size());

    const auto cal = simulate_pair(null, horizon, policy, lrt, competitor, reps, seed, 0, exec);
    const auto lrt_rt = randomized_threshold(cal.lrt, alpha);
    const auto comp_rt = randomized_threshold(cal.comp, alpha);
    const auto h0 = simulate_pair(null, horizon, policy, lrt, competitor, reps, seed, 1, exec);
    const auto h1 = simulate_pair(alt, horizon, policy, lrt, competitor, reps, seed, 2, exec);

    LrtCheckResult res;
    res.reps = reps;
    res.lrt_fpr = mean_rejection(lrt_rt, h0.lrt);
    res.competitor_fpr = mean_rejection(comp_rt, h0.comp);
    res.lrt_power = mean_rejection(lrt_rt, h1.lrt);
    res.competitor_power = mean_rejection(comp_rt, h1.comp);
    return res;
}

}  // namespace aed::calibration
