#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aed/sim/history.hpp"
#include "aed/sim/reward.hpp"

namespace aed::stats {

enum class TestKind { TwoSampleT, TConstant, TControl, ANOVA, TukeyBest, LRT };
enum class Sidedness { OneSidedRight, TwoSided };

/// How a multi-comparison test is turned into rejection events.
///   PerComparison: every comparison is tested on its own against one shared
///     threshold calibrated on the pooled per-comparison null statistics.
///   AllReject: the family rejects only when every comparison does, i.e. the
///     scalar min-over-comparisons statistic is calibrated and tested.
enum class FamilyMode { PerComparison, AllReject };

std::string_view to_string(TestKind kind);
TestKind test_kind_from_string(std::string_view name);
std::string_view to_string(Sidedness s);
Sidedness sidedness_from_string(std::string_view name);
std::string_view to_string(FamilyMode m);
FamilyMode family_mode_from_string(std::string_view name);

struct TestSpec {
    TestKind kind = TestKind::TwoSampleT;
    Sidedness sidedness = Sidedness::OneSidedRight;
    FamilyMode family = FamilyMode::PerComparison;
    double baseline = 0.5;  // TConstant
    int control_arm = 0;    // TControl
    int arm_i = 0;          // TwoSampleT: statistic is arm_i minus arm_j
    int arm_j = 1;
    double min_effect = 0.0;  // d0
    /// Two-sample comparisons use the pooled (equal-variance) standard error
    /// instead of Welch's.
    bool pooled_variance = false;
    std::vector<sim::RewardKernel> lrt_null;  // LRT only
    std::vector<sim::RewardKernel> lrt_alt;

    static TestSpec two_sample_t(Sidedness s, int i = 0, int j = 1);
    static TestSpec t_constant(double baseline, double d0 = 0.0);
    static TestSpec t_control(int control_arm, double d0 = 0.0);
    static TestSpec anova(double d0 = 0.0);
    /// Defaults to FamilyMode::AllReject.
    static TestSpec tukey_best(double d0 = 0.0);
    static TestSpec lrt(const sim::ArmVector& null, const sim::ArmVector& alt);

    /// Throws std::invalid_argument when the spec is inconsistent with K arms.
    void validate(int arms) const;

    /// Sidedness actually used for rejection (fixed for every kind except
    /// TwoSampleT).
    Sidedness effective_sidedness() const;
};

struct ComparisonStat {
    int arm = 0;
    int other = -1;  // -1: compared against a constant baseline
    std::optional<double> value;
};

/// A test statistic; `value` is empty when Undefined.
struct StatValue {
    std::optional<double> value;
    std::vector<ComparisonStat> per_comparison;
    int best_arm = -1;  // TukeyBest only
};

/// Welch statistic (mean_i - mean_j) / sqrt(var_i/n_i + var_j/n_j).
std::optional<double> welch_t(const sim::ArmTotals& a, const sim::ArmTotals& b);

/// Student statistic with pooled variance sp^2 = (SS_a + SS_b) / (n_a + n_b - 2).
std::optional<double> pooled_t(const sim::ArmTotals& a, const sim::ArmTotals& b);

/// Evaluates `spec` on per-arm totals.  `out` is overwritten; its buffers are
/// reused, which matters inside replication loops.
void evaluate(const TestSpec& spec, std::span<const sim::ArmTotals> totals, StatValue& out);
StatValue evaluate(const TestSpec& spec, std::span<const sim::ArmTotals> totals);

StatValue two_sample_t(const sim::CompressedHistory& h, std::int64_t t, int i, int j);
StatValue t_constant_stat(const sim::CompressedHistory& h, std::int64_t t, const TestSpec& spec);
StatValue t_control_stat(const sim::CompressedHistory& h, std::int64_t t, const TestSpec& spec);
StatValue anova_f(const sim::CompressedHistory& h, std::int64_t t);
StatValue tukey_best_stat(const sim::CompressedHistory& h, std::int64_t t);
/// Log likelihood ratio, alternative over null.  Throws std::domain_error
/// ("null-support violation") if an observed reward has zero null likelihood.
StatValue lrt_stat(const sim::CompressedHistory& h, std::int64_t t, const TestSpec& spec);

/// Orientation applied before comparing with a right-tail threshold:
/// identity for right-tailed tests, absolute value for two-sided ones.
/// Undefined maps to -inf so it never rejects.
double oriented(const TestSpec& spec, const std::optional<double>& v);

/// Null-calibration sample contributed by one statistic: one value per
/// comparison (PerComparison) or the scalar (AllReject), already oriented.
void calibration_values(const TestSpec& spec, const StatValue& stat, std::vector<double>& out);

}  // namespace aed::stats
