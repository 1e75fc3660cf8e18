#include "aed/calibration/ait.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "aed/stats/scan.hpp"

namespace aed::calibration {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t values_per_stat(const stats::TestSpec& spec, int arms) {
    if (spec.family == stats::FamilyMode::AllReject) return 1;
    switch (spec.kind) {
        case stats::TestKind::TConstant: return static_cast<std::size_t>(arms);
        case stats::TestKind::TControl:
        case stats::TestKind::TukeyBest: return static_cast<std::size_t>(arms - 1);
        default: return 1;
    }
}

}  // namespace

bool CriticalSchedule::rejects(std::int64_t t, const std::optional<double>& statistic) const {
    if (!statistic) return false;
    const double v = sided == Sided::AbsTwoSided ? std::fabs(*statistic) : *statistic;
    return v > at(t);
}

void write_csv(std::ostream& os, const CriticalSchedule& schedule) {
    os << "# sided=" << (schedule.sided == Sided::AbsTwoSided ? "abs_two_sided" : "right_tail")
       << " alpha=" << schedule.alpha << " reps=" << schedule.reps_used << "\n";
    os << "t,q_t\n";
    char buf[64];
    for (std::size_t i = 0; i < schedule.thresholds.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g\n", i + 1, schedule.thresholds[i]);
        os << buf;
    }
}

double upper_quantile(std::span<double> values, double alpha) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(values.begin(), nth, values.end());
    const double q = *nth;
    return q == -kInf ? kInf : q;
}

std::span<const double> NullSample::at(std::int64_t rep, std::size_t checkpoint) const {
    const std::size_t stride = checkpoints.size() * values_per_checkpoint;
    const std::size_t off =
        static_cast<std::size_t>(rep) * stride + checkpoint * values_per_checkpoint;
    return {values.data() + off, values_per_checkpoint};
}

NullSample simulate_null(const NullRunSpec& run, std::int64_t reps, std::uint64_t seed,
                         const sim::Execution& exec) {
    if (reps < 1) throw std::invalid_argument("null simulation needs at least one replication");
    const int arms = run.null_arms.size();
    run.spec.validate(arms);
    NullSample out;
    out.checkpoints = sim::checkpoints(run.mode, run.horizon);
    while (!out.checkpoints.empty() && out.checkpoints.back() > run.horizon) {
        out.checkpoints.pop_back();
    }
    out.values_per_checkpoint = values_per_stat(run.spec, arms);
    out.reps = reps;
    const std::size_t stride = out.checkpoints.size() * out.values_per_checkpoint;
    out.values.assign(static_cast<std::size_t>(reps) * stride, -kInf);

    sim::parallel_for(static_cast<std::size_t>(reps), exec, [&](std::size_t rep) {
        sim::Rng rng = sim::derive_stream(seed, rep, sim::StageTag::kCalibration);
        const auto h = sim::run(run.mode, run.null_arms, run.horizon, run.policy, rng);
        std::vector<double> vals;
        double* base = out.values.data() + rep * stride;
        stats::scan_checkpoints(h, run.horizon, run.spec,
                                [&](std::size_t c, std::int64_t, const auto&, const auto& stat) {
                                    stats::calibration_values(run.spec, stat, vals);
                                    std::copy(vals.begin(), vals.end(),
                                              base + c * out.values_per_checkpoint);
                                });
    });
    return out;
}

CheckpointSchedule thresholds_from_sample(const NullSample& sample, double alpha) {
    CheckpointSchedule cs;
    cs.checkpoints = sample.checkpoints;
    cs.thresholds.resize(sample.checkpoints.size());
    std::vector<double> pool;
    pool.reserve(static_cast<std::size_t>(sample.reps) * sample.values_per_checkpoint);
    for (std::size_t c = 0; c < sample.checkpoints.size(); ++c) {
        pool.clear();
        for (std::int64_t r = 0; r < sample.reps; ++r) {
            const auto v = sample.at(r, c);
            pool.insert(pool.end(), v.begin(), v.end());
        }
        cs.thresholds[c] = upper_quantile(pool, alpha);
    }
    return cs;
}

CheckpointSchedule calibrate_checkpoints(const NullRunSpec& run, double alpha, std::int64_t reps,
                                         std::uint64_t seed, const sim::Execution& exec) {
    return thresholds_from_sample(simulate_null(run, reps, seed, exec), alpha);
}

std::vector<double> expand_to_steps(const CheckpointSchedule& cs, std::int64_t horizon) {
    const auto map = sim::step_to_checkpoint(cs.checkpoints, horizon);
    std::vector<double> out(static_cast<std::size_t>(horizon), kInf);
    for (std::size_t t = 0; t < map.size(); ++t) {
        if (map[t] >= 0) out[t] = cs.thresholds[static_cast<std::size_t>(map[t])];
    }
    return out;
}

CriticalSchedule ait_calibrate(int arms, std::int64_t horizon, const NullEstimate& null,
                               const stats::TestSpec& spec, const sim::Policy& policy,
                               double alpha, std::int64_t reps, std::uint64_t seed,
                               sim::RunnerMode mode, const sim::Execution& exec) {
    if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5]");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (reps < 100) throw std::invalid_argument("AIT calibration needs at least 100 replications");
    NullRunSpec run{sim::ArmVector::identical(null.kernel, arms), horizon, policy, spec, mode};
    const auto cs = calibrate_checkpoints(run, alpha, reps, seed, exec);
    CriticalSchedule out;
    out.thresholds = expand_to_steps(cs, horizon);
    out.sided = spec.effective_sidedness() == stats::Sidedness::TwoSided ? Sided::AbsTwoSided
                                                                           : Sided::RightTail;
    out.alpha = alpha;
    out.reps_used = reps;
    return out;
}

}  // namespace aed::calibration
