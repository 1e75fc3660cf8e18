#include "aed/power/power_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "aed/calibration/null_estimate.hpp"
#include "aed/sim/rng.hpp"
#include "aed/stats/classical.hpp"
#include "aed/stats/scan.hpp"

namespace aed::power {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kChunk = 64;

int true_best(const std::vector<double>& mu) {
    return static_cast<int>(std::max_element(mu.begin(), mu.end()) - mu.begin());
}

bool per_comparison(const stats::TestSpec& spec) {
    return spec.family == stats::FamilyMode::PerComparison &&
           (spec.kind == stats::TestKind::TConstant || spec.kind == stats::TestKind::TControl);
}

/// Eligibility of each rejection event under the true means.  With d0 = 0
/// every event counts.
std::vector<char> eligible_events(const stats::TestSpec& spec, const std::vector<double>& mu) {
    const double d0 = spec.min_effect;
    const bool filter = d0 > 0.0;
    const int k = static_cast<int>(mu.size());
    std::vector<char> out;
    auto all_of = [&](const std::vector<char>& v) {
        return std::all_of(v.begin(), v.end(), [](char c) { return c != 0; });
    };
    switch (spec.kind) {
        case stats::TestKind::TwoSampleT: {
            const double diff = mu[spec.arm_i] - mu[spec.arm_j];
            const double effect =
                spec.effective_sidedness() == stats::Sidedness::TwoSided ? std::fabs(diff) : diff;
            out.push_back(!filter || effect > d0);
            break;
        }
        case stats::TestKind::TConstant:
            for (int a = 0; a < k; ++a) out.push_back(!filter || mu[a] - spec.baseline > d0);
            break;
        case stats::TestKind::TControl:
            for (int a = 0; a < k; ++a) {
                if (a == spec.control_arm) continue;
                out.push_back(!filter || std::fabs(mu[a] - mu[spec.control_arm]) > d0);
            }
            break;
        case stats::TestKind::ANOVA: {
            const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
            out.push_back(!filter || *hi - *lo > d0);
            break;
        }
        case stats::TestKind::TukeyBest: {
            std::vector<double> sorted = mu;
            std::sort(sorted.begin(), sorted.end(), std::greater<>());
            out.push_back(!filter || sorted[0] - sorted[1] > d0);
            break;
        }
        case stats::TestKind::LRT:
            out.push_back(1);
            break;
    }
    if (!per_comparison(spec) && out.size() > 1) return {static_cast<char>(all_of(out))};
    return out;
}

/// Number of eligible events rejected by `stat` at threshold q.
int rejections(const stats::TestSpec& spec, const stats::StatValue& stat,
               const std::vector<char>& eligible, int best, double q) {
    if (per_comparison(spec)) {
        int n = 0;
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            if (eligible[i] && stats::oriented(spec, stat.per_comparison[i].value) > q) ++n;
        }
        return n;
    }
    if (!eligible[0]) return 0;
    if (spec.kind == stats::TestKind::TukeyBest && stat.best_arm != best) return 0;
    return stats::oriented(spec, stat.value) > q ? 1 : 0;
}

struct Replication {
    sim::ArmVector arms;
    sim::CompressedHistory history;
};

Replication replicate(const PowerConfig& cfg, std::size_t r) {
    sim::Rng prior_rng = sim::derive_stream(cfg.seed, r, sim::StageTag::kPrior);
    sim::ArmVector arms = cfg.prior.draw(prior_rng);
    sim::Rng rng = sim::derive_stream(cfg.seed, r, sim::StageTag::kExperiment);
    auto h = sim::run(cfg.mode, arms, cfg.horizon, cfg.policy, rng);
    return {std::move(arms), std::move(h)};
}

/// Adds r-bar_t = (cumulative reward up to t) / t for t = 1..T into `acc`.
void add_reward_curve(const sim::CompressedHistory& h, std::int64_t horizon,
                      std::vector<double>& acc) {
    std::int64_t t = 0;
    double total = 0.0;
    for (const auto& e : h.entries) {
        const double per_draw = e.reward_sum / static_cast<double>(e.draws);
        for (std::int64_t d = 0; d < e.draws && t < horizon; ++d) {
            total += per_draw;
            ++t;
            acc[static_cast<std::size_t>(t - 1)] += total / static_cast<double>(t);
        }
        if (t >= horizon) break;
    }
}

struct NullFit {
    double theta = 0.0;
    double scale = 0.0;
};

NullFit fit_null(const sim::CompressedHistory& h, std::int64_t horizon, sim::RewardKind kind) {
    double n = 0.0;
    double s = 0.0;
    double sq = 0.0;
    std::int64_t cum = 0;
    for (const auto& e : h.entries) {
        if (cum + e.draws > horizon) break;
        cum += e.draws;
        n += static_cast<double>(e.draws);
        s += e.reward_sum;
        sq += e.reward_sq_sum;
    }
    const auto est = calibration::estimate_null(n, s, sq, kind);
    return {est.theta, kind == sim::RewardKind::Gaussian ? est.kernel.scale() : 0.0};
}

sim::Execution silent(const sim::Execution& exec) {
    sim::Execution e;
    e.jobs = exec.jobs;
    return e;
}

}  // namespace

std::string_view to_string(ThresholdSource s) {
    switch (s) {
        case ThresholdSource::AitGrid: return "ait";
        case ThresholdSource::Classical: return "classical";
        case ThresholdSource::FixedSchedule: return "schedule";
    }
    return "?";
}

ThresholdSource threshold_source_from_string(std::string_view name) {
    if (name == "ait") return ThresholdSource::AitGrid;
    if (name == "classical") return ThresholdSource::Classical;
    if (name == "schedule") return ThresholdSource::FixedSchedule;
    throw std::invalid_argument("unknown threshold source '" + std::string(name) + "'");
}

void PowerConfig::validate() const {
    prior.validate();
    spec.validate(prior.arms);
    if (horizon < 2) throw std::invalid_argument("horizon must be >= 2");
    if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5]");
    if (grid_points < 2) throw std::invalid_argument("B must be >= 2");
    if (reps < grid_points) throw std::invalid_argument("M must be >= B");
    if (calibration_reps != 0 && calibration_reps < 100) {
        throw std::invalid_argument("calibration_reps must be >= 100");
    }
    if (thresholds == ThresholdSource::FixedSchedule && schedule.horizon() < horizon) {
        throw std::invalid_argument("threshold schedule shorter than the horizon");
    }
    if (thresholds == ThresholdSource::Classical && spec.kind == stats::TestKind::LRT) {
        throw std::invalid_argument("LRT has no classical threshold");
    }
    if (spec.kind == stats::TestKind::LRT && mode != sim::RunnerMode::Exact) {
        throw std::invalid_argument("LRT power analysis needs the exact runner");
    }
}

std::int64_t PowerConfig::resolved_calibration_reps() const {
    if (calibration_reps > 0) return calibration_reps;
    return std::max<std::int64_t>(100, reps / grid_points);
}

std::optional<std::int64_t> PowerCurve::min_horizon(double beta0) const {
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (beta[i] <= beta0) return static_cast<std::int64_t>(i + 1);
    }
    return std::nullopt;
}

void write_csv(std::ostream& os, const PowerCurve& curve) {
    os << "t,beta,mean_reward\n";
    char buf[96];
    for (std::size_t i = 0; i < curve.beta.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f\n", i + 1, curve.beta[i],
                      curve.mean_reward[i]);
        os << buf;
    }
}

double interpolate_threshold(double lo, double hi, double weight) {
    if (weight <= 0.0) return lo;
    if (weight >= 1.0) return hi;
    if (std::isinf(lo) || std::isinf(hi)) return kInf;
    return lo + (hi - lo) * weight;
}

std::size_t power_analysis_work(const PowerConfig& config) {
    auto work = static_cast<std::size_t>(2 * config.reps);
    if (config.thresholds == ThresholdSource::AitGrid) {
        work += static_cast<std::size_t>(config.grid_points) *
                static_cast<std::size_t>(config.resolved_calibration_reps());
    }
    return work;
}

PowerCurve power_analysis(const PowerConfig& cfg, const sim::Execution& exec) {
    cfg.validate();
    const auto reps = static_cast<std::size_t>(cfg.reps);
    const auto horizon = static_cast<std::size_t>(cfg.horizon);
    const std::size_t chunks = (reps + kChunk - 1) / kChunk;
    const sim::Execution quiet = silent(exec);
    auto report = [&](std::size_t n) {
        if (exec.progress) exec.progress(n);
    };

    auto cps = sim::checkpoints(cfg.mode, cfg.horizon);
    while (!cps.empty() && cps.back() > cfg.horizon) cps.pop_back();
    const std::size_t ncp = cps.size();

    // Pass 1: null fits and the reward curve.
    std::vector<NullFit> fits(reps);
    std::vector<std::vector<double>> reward_parts(chunks);
    sim::parallel_for(
        chunks, quiet,
        [&](std::size_t c) {
            auto& acc = reward_parts[c];
            acc.assign(horizon, 0.0);
            const std::size_t stop = std::min(reps, (c + 1) * kChunk);
            for (std::size_t r = c * kChunk; r < stop; ++r) {
                const auto rep = replicate(cfg, r);
                add_reward_curve(rep.history, cfg.horizon, acc);
                fits[r] = fit_null(rep.history, cfg.horizon, cfg.prior.reward_kind);
            }
            report(stop - c * kChunk);
        },
        1);

    PowerCurve curve;
    curve.reps = cfg.reps;
    curve.mean_reward.assign(horizon, 0.0);
    for (const auto& part : reward_parts) {
        for (std::size_t t = 0; t < horizon; ++t) curve.mean_reward[t] += part[t];
    }
    for (auto& v : curve.mean_reward) v /= static_cast<double>(reps);
    reward_parts.clear();

    // Pass 2: thresholds per checkpoint.
    std::vector<std::vector<double>> grid_thresholds;
    std::vector<double> fixed_thresholds;
    double grid_lo = 0.0;
    double grid_step = 0.0;
    if (cfg.thresholds == ThresholdSource::AitGrid) {
        auto [lo_it, hi_it] = std::minmax_element(
            fits.begin(), fits.end(),
            [](const NullFit& a, const NullFit& b) { return a.theta < b.theta; });
        // The constant baseline is the null itself; nothing to estimate.
        const bool fixed_null = cfg.spec.kind == stats::TestKind::TConstant;
        grid_lo = fixed_null ? cfg.spec.baseline : lo_it->theta;
        const double grid_hi = fixed_null ? cfg.spec.baseline : hi_it->theta;
        const int b = grid_hi > grid_lo ? cfg.grid_points : 1;
        grid_step = b > 1 ? (grid_hi - grid_lo) / (b - 1) : 0.0;
        double scale = 0.0;
        if (cfg.prior.reward_kind == sim::RewardKind::Gaussian) {
            for (const auto& f : fits) scale += f.scale;
            scale = std::max(scale / static_cast<double>(reps), calibration::kGaussianScaleFloor);
        }
        sim::Execution cal_exec = quiet;
        cal_exec.progress = exec.progress;
        for (int i = 0; i < b; ++i) {
            const double theta = i == b - 1 ? grid_hi : grid_lo + grid_step * i;
            curve.grid.push_back(theta);
            const auto kernel = cfg.prior.reward_kind == sim::RewardKind::Bernoulli
                                    ? sim::RewardKernel::bernoulli(std::clamp(theta, 0.0, 1.0))
                                    : sim::RewardKernel::gaussian(theta, scale);
            calibration::NullRunSpec run{sim::ArmVector::identical(kernel, cfg.prior.arms),
                                         cfg.horizon, cfg.policy, cfg.spec, cfg.mode};
            const auto seed =
                sim::derive_seed(cfg.seed, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint32_t>(sim::StageTag::kCalibration));
            auto cs = calibration::calibrate_checkpoints(run, cfg.alpha,
                                                         cfg.resolved_calibration_reps(), seed,
                                                         cal_exec);
            grid_thresholds.push_back(std::move(cs.thresholds));
        }
        if (b == 1) report(static_cast<std::size_t>(cfg.grid_points - 1) *
                           static_cast<std::size_t>(cfg.resolved_calibration_reps()));
    } else {
        fixed_thresholds.resize(ncp);
        for (std::size_t c = 0; c < ncp; ++c) {
            fixed_thresholds[c] =
                cfg.thresholds == ThresholdSource::Classical
                    ? stats::classical_threshold(cfg.spec, cfg.prior.arms, cps[c], cfg.alpha)
                    : cfg.schedule.at(cps[c]);
        }
    }

    // Pass 3: rejections against each replication's thresholds.
    std::vector<std::vector<std::int64_t>> rej_parts(chunks);
    std::vector<std::int64_t> eligible_parts(chunks, 0);
    std::vector<std::int64_t> eligible_rep_parts(chunks, 0);
    const auto nb = grid_thresholds.size();
    sim::parallel_for(
        chunks, quiet,
        [&](std::size_t c) {
            auto& rej = rej_parts[c];
            rej.assign(ncp, 0);
            std::vector<double> q(ncp);
            const std::size_t stop = std::min(reps, (c + 1) * kChunk);
            for (std::size_t r = c * kChunk; r < stop; ++r) {
                const auto rep = replicate(cfg, r);
                const auto mu = rep.arms.means();
                const auto elig = eligible_events(cfg.spec, mu);
                const auto n_elig = std::count(elig.begin(), elig.end(), 1);
                eligible_parts[c] += n_elig;
                if (n_elig == 0) continue;
                ++eligible_rep_parts[c];
                if (nb > 0) {
                    std::size_t lo = 0;
                    double w = 0.0;
                    if (nb > 1) {
                        const double pos = (fits[r].theta - grid_lo) / grid_step;
                        lo = static_cast<std::size_t>(
                            std::clamp(std::floor(pos), 0.0, static_cast<double>(nb - 2)));
                        w = pos - static_cast<double>(lo);
                        if (fits[r].theta == curve.grid[lo]) w = 0.0;
                        if (fits[r].theta == curve.grid[lo + 1]) w = 1.0;
                    }
                    const auto& qlo = grid_thresholds[lo];
                    const auto& qhi = grid_thresholds[std::min(lo + 1, nb - 1)];
                    for (std::size_t k = 0; k < ncp; ++k) {
                        q[k] = interpolate_threshold(qlo[k], qhi[k], w);
                    }
                } else {
                    q = fixed_thresholds;
                }
                const int best = true_best(mu);
                stats::scan_checkpoints(
                    rep.history, cfg.horizon, cfg.spec,
                    [&](std::size_t k, std::int64_t, const auto&, const stats::StatValue& stat) {
                        rej[k] += rejections(cfg.spec, stat, elig, best, q[k]);
                    });
            }
            report(stop - c * kChunk);
        },
        1);

    std::vector<std::int64_t> rej(ncp, 0);
    for (std::size_t c = 0; c < chunks; ++c) {
        curve.eligible += eligible_parts[c];
        curve.eligible_reps += eligible_rep_parts[c];
        for (std::size_t k = 0; k < ncp; ++k) rej[k] += rej_parts[c][k];
    }
    if (curve.eligible == 0) throw std::runtime_error("prior incompatible with minimum effect");

    const auto map = sim::step_to_checkpoint(cps, cfg.horizon);
    curve.beta.assign(horizon, 1.0);
    const double denom = static_cast<double>(curve.eligible);
    for (std::size_t t = 0; t < horizon; ++t) {
        if (map[t] >= 0) {
            curve.beta[t] = 1.0 - static_cast<double>(rej[static_cast<std::size_t>(map[t])]) / denom;
        }
    }
    return curve;
}

double fpr_analysis(PowerConfig config, const std::vector<double>& null_means,
                    const sim::Execution& exec) {
    if (null_means.empty()) throw std::invalid_argument("null means missing");
    const bool same = std::all_of(null_means.begin(), null_means.end(),
                                  [&](double m) { return m == null_means.front(); });
    if (!same) throw std::invalid_argument("FPR analysis needs identical arms");
    config.prior = config.prior.reward_kind == sim::RewardKind::Bernoulli
                       ? PriorSpec::fixed_bernoulli(null_means)
                       : PriorSpec::fixed_gaussian(null_means, config.prior.reward_scale);
    config.spec.min_effect = 0.0;
    const auto curve = power_analysis(config, exec);
    return curve.power(config.horizon);
}

}  // namespace aed::power
