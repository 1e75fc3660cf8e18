#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "aed/sim/rng.hpp"
#include "aed/stats/classical.hpp"
#include "aed/stats/scan.hpp"
#include "aed/stats/summaries.hpp"
#include "aed/stats/tests.hpp"

using namespace aed;
using namespace aed::stats;

namespace {

// One entry per draw, arms listed in order.
sim::CompressedHistory history_of(const std::vector<std::vector<double>>& draws) {
    sim::CompressedHistory h;
    h.arms = static_cast<int>(draws.size());
    for (int a = 0; a < h.arms; ++a) {
        for (double r : draws[static_cast<std::size_t>(a)]) h.append({a, r, r * r, 1});
    }
    return h;
}

sim::ArmTotals totals_of(const std::vector<double>& x) {
    sim::ArmTotals t;
    for (double r : x) {
        ++t.pulls;
        t.reward_sum += r;
        t.reward_sq_sum += r * r;
    }
    return t;
}

// Reference Welch statistic from raw samples with two-pass variances.
double welch_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    auto var = [&](const std::vector<double>& v) {
        const double m = mean(v);
        double s = 0;
        for (double e : v) s += (e - m) * (e - m);
        return s / static_cast<double>(v.size() - 1);
    };
    return (mean(x) - mean(y)) /
           std::sqrt(var(x) / static_cast<double>(x.size()) + var(y) / static_cast<double>(y.size()));
}

}  // namespace

TEST_CASE("arm summaries") {
    sim::CompressedHistory h;
    h.arms = 2;
    h.append({0, 3.0, 3.0, 4});
    const auto s = arm_summaries(h, 4);
    CHECK(s[0].n == 4);
    CHECK(*s[0].mean == doctest::Approx(0.75));
    CHECK(*s[0].variance == doctest::Approx((3.0 - 4 * 0.5625) / 3.0));
    CHECK(s[1].n == 0);
    CHECK_FALSE(s[1].mean);
    CHECK_FALSE(s[1].variance);

    CHECK(*summarize(totals_of({2.5, 2.5, 2.5})).variance == doctest::Approx(0.0));
    CHECK_FALSE(summarize(totals_of({1.0})).variance);

    // Entries completing after t are excluded.
    CHECK(arm_totals(h, 3)[0].pulls == 0);
}

TEST_CASE("two-sample t") {
    const std::vector<double> a{1, 1, 0, 0}, b{1, 0, 0, 0};
    const auto v = welch_t(totals_of(a), totals_of(b));
    REQUIRE(v);
    CHECK(*v == doctest::Approx(welch_oracle(a, b)).epsilon(1e-12));
    CHECK(*v == doctest::Approx(0.6547).epsilon(1e-4));
    CHECK(*welch_t(totals_of(b), totals_of(a)) == doctest::Approx(-*v));
    CHECK(*welch_t(totals_of(a), totals_of(a)) == doctest::Approx(0.0));
    CHECK_FALSE(welch_t(totals_of({1.0}), totals_of(b)));

    const auto h = history_of({a, b});
    CHECK(*two_sample_t(h, 8, 0, 1).value == doctest::Approx(*v));

    // Random samples against the oracle.
    auto rng = sim::derive_stream(3, 0, sim::StageTag::kOracle);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(5 + trial % 7), y(3 + trial % 11);
        for (auto& e : x) e = sim::uniform01(rng) * 3.0;
        for (auto& e : y) e = sim::uniform01(rng) - 0.5;
        CHECK(*welch_t(totals_of(x), totals_of(y)) ==
              doctest::Approx(welch_oracle(x, y)).epsilon(1e-9));
    }
}

TEST_CASE("t-constant") {
    TestSpec spec = TestSpec::t_constant(0.5);
    const auto at_baseline = evaluate(spec, std::vector{totals_of({0, 1, 0, 1}), totals_of({1, 0, 1, 0})});
    CHECK(*at_baseline.value == doctest::Approx(0.0));

    // Minimum of per-arm one-sample statistics.
    spec.family = FamilyMode::AllReject;
    const auto three = evaluate(spec, std::vector{totals_of({1, 1, 0, 1, 1}), totals_of({1, 1, 1, 0}),
                                                  totals_of({1, 0, 1, 1, 1, 1})});
    double m = INFINITY;
    for (const auto& c : three.per_comparison) m = std::min(m, *c.value);
    CHECK(*three.value == doctest::Approx(m));

    const auto undefined = evaluate(spec, std::vector{totals_of({1}), totals_of({1, 0})});
    CHECK_FALSE(undefined.value);
}

TEST_CASE("t-control") {
    TestSpec spec = TestSpec::t_control(0);
    const auto same = evaluate(spec, std::vector{totals_of({1, 0, 1}), totals_of({1, 0, 1})});
    CHECK(*same.value == doctest::Approx(0.0));

    const std::vector<double> c{1, 0, 0, 1, 0}, x{1, 1, 1, 0}, y{0, 0, 1, 0, 0, 1};
    const auto three = evaluate(spec, std::vector{totals_of(c), totals_of(x), totals_of(y)});
    const double tx = std::fabs(welch_oracle(x, c));
    const double ty = std::fabs(welch_oracle(y, c));
    CHECK(*three.value == doctest::Approx(std::min(tx, ty)));

    const auto two = evaluate(spec, std::vector{totals_of(c), totals_of(x)});
    CHECK(*two.value == doctest::Approx(tx));
    CHECK(spec.effective_sidedness() == Sidedness::TwoSided);
    CHECK_FALSE(evaluate(spec, std::vector{totals_of({1}), totals_of(x)}).value);
}

TEST_CASE("ANOVA") {
    const auto spec = TestSpec::anova();
    CHECK(*evaluate(spec, std::vector{totals_of({0, 1}), totals_of({1, 0})}).value == doctest::Approx(0.0));
    CHECK_FALSE(evaluate(spec, std::vector{totals_of({1, 1}), totals_of({1, 1})}).value);

    // K = 2: F equals the squared pooled t.
    auto rng = sim::derive_stream(4, 0, sim::StageTag::kOracle);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(4 + trial), y(6 + trial / 2);
        for (auto& e : x) e = sim::uniform01(rng);
        for (auto& e : y) e = sim::uniform01(rng) + 0.2;
        const double f = *evaluate(spec, std::vector{totals_of(x), totals_of(y)}).value;
        const double t = *pooled_t(totals_of(x), totals_of(y));
        CHECK(std::fabs(f - t * t) < 1e-9);
    }
}

TEST_CASE("Tukey best-arm statistic") {
    const auto spec = TestSpec::tukey_best();
    const auto tied = evaluate(spec, std::vector{totals_of({1, 0, 1}), totals_of({1, 0, 1}), totals_of({0, 0, 1})});
    CHECK(tied.best_arm == 0);

    const std::vector<double> a{1, 1, 1, 0, 1}, b{0, 1, 0, 0}, c{1, 1, 0, 1, 0};
    const auto s = evaluate(spec, std::vector{totals_of(a), totals_of(b), totals_of(c)});
    CHECK(s.best_arm == 0);
    REQUIRE(s.per_comparison.size() == 2);
    CHECK(*s.value == doctest::Approx(std::min(welch_oracle(a, b), welch_oracle(a, c))));
    CHECK(*evaluate(spec, std::vector{totals_of({1, 0}), totals_of({1, 0})}).value == doctest::Approx(0.0));
    CHECK_FALSE(evaluate(spec, std::vector{totals_of({}), totals_of({1, 0})}).value);
}

TEST_CASE("likelihood ratio statistic") {
    const auto null = sim::ArmVector::bernoulli(std::vector<double>{0.5, 0.5});
    const auto alt = sim::ArmVector::bernoulli(std::vector<double>{0.6, 0.4});
    const auto spec = TestSpec::lrt(null, alt);
    const auto one = history_of({{1.0}, {}});
    CHECK(*lrt_stat(one, 1, spec).value == doctest::Approx(std::log(1.2)));

    const auto same = TestSpec::lrt(null, null);
    const auto h = history_of({{1, 0, 1}, {0, 0}});
    CHECK(*lrt_stat(h, 5, same).value == doctest::Approx(0.0));

    // Order of the entries does not matter.
    sim::CompressedHistory rev;
    rev.arms = 2;
    for (auto it = h.entries.rbegin(); it != h.entries.rend(); ++it) rev.append(*it);
    CHECK(*lrt_stat(rev, 5, spec).value == doctest::Approx(*lrt_stat(h, 5, spec).value));

    const auto degenerate = TestSpec::lrt(sim::ArmVector::bernoulli(std::vector<double>{0.0, 0.5}), alt);
    CHECK_THROWS_WITH_AS(lrt_stat(one, 1, degenerate), "null-support violation", std::domain_error);
}

TEST_CASE("classical thresholds") {
    CHECK(classical_threshold(TestSpec::two_sample_t(Sidedness::OneSidedRight), 2, 200, 0.05) ==
          doctest::Approx(1.6449).epsilon(1e-4));
    CHECK(classical_threshold(TestSpec::two_sample_t(Sidedness::TwoSided), 2, 200, 0.05) ==
          doctest::Approx(1.9600).epsilon(1e-4));
    // F(2, 297) upper 5% point from tables.
    CHECK(classical_threshold(TestSpec::anova(), 3, 300, 0.05) == doctest::Approx(3.03).epsilon(0.005));
    // Range of two standard normals is sqrt(2)|Z|.
    CHECK(studentized_range_quantile(0.95, 2) == doctest::Approx(std::sqrt(2.0) * 1.95996).epsilon(1e-4));
    CHECK(studentized_range_cdf(studentized_range_quantile(0.9, 4), 4) == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("orientation and calibration values") {
    auto two = TestSpec::two_sample_t(Sidedness::TwoSided);
    CHECK(oriented(two, -2.0) == 2.0);
    CHECK(oriented(TestSpec::two_sample_t(Sidedness::OneSidedRight), -2.0) == -2.0);
    CHECK(oriented(two, std::nullopt) == -INFINITY);

    StatValue s;
    s.value = 1.0;
    s.per_comparison = {{1, 0, 1.0}, {2, 0, -3.0}};
    std::vector<double> out;
    auto ctl = TestSpec::t_control(0);
    calibration_values(ctl, s, out);
    CHECK(out == std::vector<double>{1.0, 3.0});
    ctl.family = FamilyMode::AllReject;
    calibration_values(ctl, s, out);
    CHECK(out == std::vector<double>{1.0});
}

TEST_CASE("spec validation") {
    CHECK_THROWS_WITH(TestSpec::anova().validate(1), "K must be >= 2");
    CHECK_THROWS(TestSpec::t_control(3).validate(3));
    CHECK_THROWS(TestSpec::two_sample_t(Sidedness::TwoSided, 0, 0).validate(2));
    CHECK_NOTHROW(TestSpec::tukey_best(0.1).validate(3));
    CHECK(test_kind_from_string("tukey") == TestKind::TukeyBest);
    CHECK_THROWS(test_kind_from_string("chi2"));
}

TEST_CASE("scan visits every completed entry") {
    const auto h = history_of({{1, 0, 1}, {0, 1}});
    std::vector<std::int64_t> seen;
    scan_checkpoints(h, 4, TestSpec::anova(), [&](std::size_t, std::int64_t cum, const auto&, const auto&) {
        seen.push_back(cum);
    });
    CHECK(seen == std::vector<std::int64_t>{1, 2, 3, 4});
}
