#include "aed/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "aed/stats/summaries.hpp"

namespace aed::stats {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::optional<double> one_sample_t(const sim::ArmTotals& a, double baseline) {
    const ArmSummary s = summarize(a);
    if (!s.variance) return std::nullopt;
    const double se2 = *s.variance / static_cast<double>(s.n);
    if (se2 <= 0.0) return std::nullopt;
    return (*s.mean - baseline) / std::sqrt(se2);
}

/// Minimum over comparisons; Undefined if any comparison is.
std::optional<double> min_over(const std::vector<ComparisonStat>& comps, bool absolute) {
    if (comps.empty()) return std::nullopt;
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : comps) {
        if (!c.value) return std::nullopt;
        m = std::min(m, absolute ? std::fabs(*c.value) : *c.value);
    }
    return m;
}

void eval_anova(std::span<const sim::ArmTotals> totals, StatValue& out) {
    const int k = static_cast<int>(totals.size());
    double n_total = 0.0;
    double grand = 0.0;
    for (const auto& a : totals) {
        if (a.pulls < 2) return;
        n_total += static_cast<double>(a.pulls);
        grand += a.reward_sum;
    }
    grand /= n_total;
    double between = 0.0;
    double within = 0.0;
    for (const auto& a : totals) {
        const ArmSummary s = summarize(a);
        const double n = static_cast<double>(s.n);
        between += n * (*s.mean - grand) * (*s.mean - grand);
        within += (n - 1.0) * *s.variance;
    }
    const double df_within = n_total - k;
    if (df_within <= 0.0) return;
    const double num = between / (k - 1);
    const double den = within / df_within;
    if (den <= 0.0) {
        if (num <= 0.0) return;
        out.value = std::numeric_limits<double>::infinity();
        return;
    }
    out.value = num / den;
}

std::optional<double> two_sample(const TestSpec& spec, const sim::ArmTotals& a,
                                 const sim::ArmTotals& b) {
    return spec.pooled_variance ? pooled_t(a, b) : welch_t(a, b);
}

void eval_tukey(const TestSpec& spec, std::span<const sim::ArmTotals> totals, StatValue& out) {
    const int k = static_cast<int>(totals.size());
    int best = 0;
    double best_mean = kNegInf;
    bool all_defined = true;
    for (int a = 0; a < k; ++a) {
        if (totals[a].pulls == 0) {
            all_defined = false;
            continue;
        }
        const double m = totals[a].reward_sum / static_cast<double>(totals[a].pulls);
        if (m > best_mean) {
            best_mean = m;
            best = a;
        }
    }
    out.best_arm = all_defined ? best : -1;
    for (int a = 0; a < k; ++a) {
        if (a == best) continue;
        ComparisonStat c{best, a, std::nullopt};
        if (all_defined) c.value = two_sample(spec, totals[best], totals[a]);
        out.per_comparison.push_back(c);
    }
    out.value = min_over(out.per_comparison, false);
}

double lrt_arm_term(const sim::RewardKernel& null, const sim::RewardKernel& alt,
                    const sim::ArmTotals& a) {
    if (a.pulls == 0) return 0.0;
    const double n = static_cast<double>(a.pulls);
    if (null.kind() == sim::RewardKind::Bernoulli) {
        const double s = a.reward_sum;
        const double f = n - s;
        auto term = [](double count, double p_alt, double p_null) {
            if (count <= 0.0) return 0.0;
            if (p_null <= 0.0) throw std::domain_error("null-support violation");
            if (p_alt <= 0.0) return kNegInf;
            return count * (std::log(p_alt) - std::log(p_null));
        };
        return term(s, alt.mean(), null.mean()) +
               term(f, 1.0 - alt.mean(), 1.0 - null.mean());
    }
    auto loglik = [&](const sim::RewardKernel& k) {
        const double v = k.scale() * k.scale();
        const double ss = a.reward_sq_sum - 2.0 * k.mean() * a.reward_sum + n * k.mean() * k.mean();
        return -n * std::log(k.scale()) - 0.5 * ss / v;
    };
    return loglik(alt) - loglik(null);
}

}  // namespace

std::string_view to_string(TestKind kind) {
    switch (kind) {
        case TestKind::TwoSampleT: return "two_sample_t";
        case TestKind::TConstant: return "t_constant";
        case TestKind::TControl: return "t_control";
        case TestKind::ANOVA: return "anova";
        case TestKind::TukeyBest: return "tukey";
        case TestKind::LRT: return "lrt";
    }
    return "?";
}

TestKind test_kind_from_string(std::string_view name) {
    for (auto k : {TestKind::TwoSampleT, TestKind::TConstant, TestKind::TControl, TestKind::ANOVA,
                   TestKind::TukeyBest, TestKind::LRT}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown test kind '" + std::string(name) + "'");
}

std::string_view to_string(Sidedness s) {
    return s == Sidedness::OneSidedRight ? "one_sided" : "two_sided";
}

Sidedness sidedness_from_string(std::string_view name) {
    if (name == "one_sided") return Sidedness::OneSidedRight;
    if (name == "two_sided") return Sidedness::TwoSided;
    throw std::invalid_argument("unknown sidedness '" + std::string(name) + "'");
}

std::string_view to_string(FamilyMode m) {
    return m == FamilyMode::PerComparison ? "per_comparison" : "all_reject";
}

FamilyMode family_mode_from_string(std::string_view name) {
    if (name == "per_comparison") return FamilyMode::PerComparison;
    if (name == "all_reject") return FamilyMode::AllReject;
    throw std::invalid_argument("unknown family mode '" + std::string(name) + "'");
}

TestSpec TestSpec::two_sample_t(Sidedness s, int i, int j) {
    TestSpec spec;
    spec.kind = TestKind::TwoSampleT;
    spec.sidedness = s;
    spec.arm_i = i;
    spec.arm_j = j;
    return spec;
}

TestSpec TestSpec::t_constant(double baseline, double d0) {
    TestSpec spec;
    spec.kind = TestKind::TConstant;
    spec.baseline = baseline;
    spec.min_effect = d0;
    return spec;
}

TestSpec TestSpec::t_control(int control_arm, double d0) {
    TestSpec spec;
    spec.kind = TestKind::TControl;
    spec.sidedness = Sidedness::TwoSided;
    spec.control_arm = control_arm;
    spec.min_effect = d0;
    return spec;
}

TestSpec TestSpec::anova(double d0) {
    TestSpec spec;
    spec.kind = TestKind::ANOVA;
    spec.min_effect = d0;
    return spec;
}

TestSpec TestSpec::tukey_best(double d0) {
    TestSpec spec;
    spec.kind = TestKind::TukeyBest;
    // Its level is the chance of rejecting against every other arm at once.
    spec.family = FamilyMode::AllReject;
    spec.min_effect = d0;
    return spec;
}

TestSpec TestSpec::lrt(const sim::ArmVector& null, const sim::ArmVector& alt) {
    TestSpec spec;
    spec.kind = TestKind::LRT;
    spec.lrt_null.assign(null.kernels().begin(), null.kernels().end());
    spec.lrt_alt.assign(alt.kernels().begin(), alt.kernels().end());
    return spec;
}

Sidedness TestSpec::effective_sidedness() const {
    switch (kind) {
        case TestKind::TwoSampleT: return sidedness;
        case TestKind::TControl: return Sidedness::TwoSided;
        default: return Sidedness::OneSidedRight;
    }
}

void TestSpec::validate(int arms) const {
    if (arms < 2) throw std::invalid_argument("K must be >= 2");
    if (!(min_effect >= 0.0)) throw std::invalid_argument("d0 must be >= 0");
    switch (kind) {
        case TestKind::TwoSampleT:
            if (arm_i == arm_j || arm_i < 0 || arm_j < 0 || arm_i >= arms || arm_j >= arms) {
                throw std::invalid_argument("two-sample t needs two distinct arms in range");
            }
            break;
        case TestKind::TControl:
            if (control_arm < 0 || control_arm >= arms) {
                throw std::invalid_argument("control_arm out of range");
            }
            break;
        case TestKind::LRT:
            if (static_cast<int>(lrt_null.size()) != arms || lrt_alt.size() != lrt_null.size()) {
                throw std::invalid_argument("LRT hypotheses must specify every arm");
            }
            break;
        default:
            break;
    }
}

std::optional<double> welch_t(const sim::ArmTotals& a, const sim::ArmTotals& b) {
    const ArmSummary sa = summarize(a);
    const ArmSummary sb = summarize(b);
    if (!sa.variance || !sb.variance) return std::nullopt;
    const double se2 = *sa.variance / static_cast<double>(sa.n) +
                       *sb.variance / static_cast<double>(sb.n);
    if (se2 <= 0.0) return std::nullopt;
    return (*sa.mean - *sb.mean) / std::sqrt(se2);
}

std::optional<double> pooled_t(const sim::ArmTotals& a, const sim::ArmTotals& b) {
    const ArmSummary sa = summarize(a);
    const ArmSummary sb = summarize(b);
    if (!sa.variance || !sb.variance) return std::nullopt;
    const double na = static_cast<double>(sa.n);
    const double nb = static_cast<double>(sb.n);
    const double sp2 = ((na - 1.0) * *sa.variance + (nb - 1.0) * *sb.variance) / (na + nb - 2.0);
    const double se2 = sp2 * (1.0 / na + 1.0 / nb);
    if (se2 <= 0.0) return std::nullopt;
    return (*sa.mean - *sb.mean) / std::sqrt(se2);
}

void evaluate(const TestSpec& spec, std::span<const sim::ArmTotals> totals, StatValue& out) {
    out.value.reset();
    out.per_comparison.clear();
    out.best_arm = -1;
    const int k = static_cast<int>(totals.size());
    switch (spec.kind) {
        case TestKind::TwoSampleT: {
            const auto v = two_sample(spec, totals[spec.arm_i], totals[spec.arm_j]);
            out.per_comparison.push_back({spec.arm_i, spec.arm_j, v});
            out.value = v;
            return;
        }
        case TestKind::TConstant:
            for (int a = 0; a < k; ++a) {
                out.per_comparison.push_back({a, -1, one_sample_t(totals[a], spec.baseline)});
            }
            out.value = min_over(out.per_comparison, false);
            return;
        case TestKind::TControl:
            for (int a = 0; a < k; ++a) {
                if (a == spec.control_arm) continue;
                out.per_comparison.push_back(
                    {a, spec.control_arm, two_sample(spec, totals[a], totals[spec.control_arm])});
            }
            out.value = min_over(out.per_comparison, true);
            return;
        case TestKind::ANOVA:
            eval_anova(totals, out);
            return;
        case TestKind::TukeyBest:
            eval_tukey(spec, totals, out);
            return;
        case TestKind::LRT: {
            std::int64_t draws = 0;
            double llr = 0.0;
            for (int a = 0; a < k; ++a) {
                draws += totals[a].pulls;
                llr += lrt_arm_term(spec.lrt_null[a], spec.lrt_alt[a], totals[a]);
            }
            if (draws > 0) out.value = llr;
            return;
        }
    }
}

StatValue evaluate(const TestSpec& spec, std::span<const sim::ArmTotals> totals) {
    StatValue out;
    evaluate(spec, totals, out);
    return out;
}

StatValue two_sample_t(const sim::CompressedHistory& h, std::int64_t t, int i, int j) {
    return evaluate(TestSpec::two_sample_t(Sidedness::TwoSided, i, j), arm_totals(h, t));
}

StatValue t_constant_stat(const sim::CompressedHistory& h, std::int64_t t, const TestSpec& spec) {
    return evaluate(spec, arm_totals(h, t));
}

StatValue t_control_stat(const sim::CompressedHistory& h, std::int64_t t, const TestSpec& spec) {
    return evaluate(spec, arm_totals(h, t));
}

StatValue anova_f(const sim::CompressedHistory& h, std::int64_t t) {
    return evaluate(TestSpec::anova(), arm_totals(h, t));
}

StatValue tukey_best_stat(const sim::CompressedHistory& h, std::int64_t t) {
    return evaluate(TestSpec::tukey_best(), arm_totals(h, t));
}

StatValue lrt_stat(const sim::CompressedHistory& h, std::int64_t t, const TestSpec& spec) {
    spec.validate(h.arms);
    return evaluate(spec, arm_totals(h, t));
}

double oriented(const TestSpec& spec, const std::optional<double>& v) {
    if (!v) return kNegInf;
    return spec.effective_sidedness() == Sidedness::TwoSided ? std::fabs(*v) : *v;
}

void calibration_values(const TestSpec& spec, const StatValue& stat, std::vector<double>& out) {
    out.clear();
    const bool per_comparison =
        spec.family == FamilyMode::PerComparison &&
        (spec.kind == TestKind::TConstant || spec.kind == TestKind::TControl ||
         spec.kind == TestKind::TukeyBest);
    if (!per_comparison) {
        out.push_back(oriented(spec, stat.value));
        return;
    }
    for (const auto& c : stat.per_comparison) out.push_back(oriented(spec, c.value));
}

}  // namespace aed::stats
