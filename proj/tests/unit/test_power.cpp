#include <doctest.h>

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "aed/power/power_analysis.hpp"
#include "aed/power/power_comparison.hpp"
#include "aed/power/prior.hpp"

using namespace aed;
using namespace aed::power;

namespace {

PowerConfig two_arm(sim::Policy policy, std::int64_t horizon, std::int64_t reps) {
    PowerConfig pc;
    pc.prior = PriorSpec::fixed_bernoulli({0.6, 0.4});
    pc.horizon = horizon;
    pc.policy = policy;
    pc.spec = stats::TestSpec::two_sample_t(stats::Sidedness::TwoSided);
    pc.reps = reps;
    pc.seed = 5;
    return pc;
}

}  // namespace

TEST_CASE("priors") {
    const auto p = PriorSpec::beta_moments(3, 0.35, 0.15);
    // a + b = m(1 - m) / s^2 - 1
    const double total = 0.35 * 0.65 / 0.0225 - 1.0;
    CHECK(p.a == doctest::Approx(0.35 * total));
    CHECK(p.b == doctest::Approx(0.65 * total));
    CHECK(p.a == doctest::Approx(3.2).epsilon(0.01));
    CHECK(p.b == doctest::Approx(5.9).epsilon(0.01));

    auto rng = sim::derive_stream(1, 0, sim::StageTag::kPrior);
    const auto g = PriorSpec::gaussian_iid(6, 0.81, 0.015, 0.1);
    double sum = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto arms = g.draw(rng);
        CHECK(arms.size() == 6);
        CHECK(arms[0].scale() == 0.1);
        sum += arms[3].mean();
    }
    CHECK(sum / 2000 == doctest::Approx(0.81).epsilon(0.002));

    CHECK_THROWS(PriorSpec::beta_iid(1, 1, 1).validate());
    CHECK_THROWS(PriorSpec::beta_iid(2, -1, 1).validate());
    CHECK_THROWS(PriorSpec::beta_moments(2, 0.5, 0.6).validate());
    CHECK_THROWS(PriorSpec::fixed_bernoulli({0.5, 1.5}).validate());
    CHECK(prior_kind_from_string(to_string(PriorKind::GaussianIID)) == PriorKind::GaussianIID);
}

TEST_CASE("threshold interpolation") {
    CHECK(interpolate_threshold(1.0, 2.0, 0.0) == 1.0);
    CHECK(interpolate_threshold(1.0, 2.0, 1.0) == 2.0);
    CHECK(interpolate_threshold(1.0, 2.0, 0.25) == doctest::Approx(1.25));
    CHECK(interpolate_threshold(1.0, 2.0, -3.0) == 1.0);
    CHECK(interpolate_threshold(1.0, 2.0, 7.0) == 2.0);
}

TEST_CASE("uniform randomization needs about 200 steps at gap 0.2") {
    const auto curve = power_analysis(two_arm(sim::Policy::uniform(), 400, 2000));
    const auto t = curve.min_horizon(0.2);
    REQUIRE(t);
    CHECK(*t >= 170);
    CHECK(*t <= 230);
    CHECK(curve.horizon() == 400);
    for (std::int64_t s = 2; s <= 400; ++s) CHECK(curve.power(s) >= 0.0);
    CHECK(curve.mean_reward[399] == doctest::Approx(0.5).epsilon(0.02));
    CHECK(curve.grid.size() == 10);
}

TEST_CASE("equal arms: power equals the false positive rate") {
    auto pc = two_arm(sim::Policy::uniform(), 200, 4000);
    pc.prior = PriorSpec::fixed_bernoulli({0.5, 0.5});
    const auto curve = power_analysis(pc);
    CHECK(curve.beta[199] == doctest::Approx(0.95).epsilon(0.015));

    pc.spec.min_effect = 0.1;
    CHECK_THROWS_WITH_AS(power_analysis(pc), "prior incompatible with minimum effect",
                         std::runtime_error);
}

TEST_CASE("false positive rates under Thompson sampling") {
    auto pc = two_arm(sim::Policy::thompson(sim::RewardKind::Bernoulli), 200, 10000);
    pc.spec = stats::TestSpec::two_sample_t(stats::Sidedness::OneSidedRight);
    pc.spec.pooled_variance = true;
    pc.mode = sim::RunnerMode::Exact;
    pc.thresholds = ThresholdSource::Classical;
    CHECK(fpr_analysis(pc, {0.5, 0.5}) == doctest::Approx(0.099).epsilon(0.15));
    pc.thresholds = ThresholdSource::AitGrid;
    CHECK(fpr_analysis(pc, {0.5, 0.5}) == doctest::Approx(0.05).epsilon(0.2));
}

TEST_CASE("power analysis does not depend on the worker count") {
    auto pc = two_arm(sim::Policy::eps_thompson(0.3, sim::RewardKind::Bernoulli), 150, 300);
    const auto a = power_analysis(pc, {1, {}});
    const auto b = power_analysis(pc, {3, {}});
    CHECK(a.beta == b.beta);
    CHECK(a.mean_reward == b.mean_reward);

    std::size_t units = 0;
    sim::Execution exec{2, {}};
    std::mutex m;
    exec.progress = [&](std::size_t n) {
        std::lock_guard lock(m);
        units += n;
    };
    power_analysis(pc, exec);
    CHECK(units == power_analysis_work(pc));

    std::ostringstream os;
    write_csv(os, a);
    CHECK(os.str().rfind("t,beta,mean_reward", 0) == 0);
}

TEST_CASE("config validation") {
    auto pc = two_arm(sim::Policy::uniform(), 100, 100);
    pc.reps = 0;
    CHECK_THROWS(pc.validate());
    pc = two_arm(sim::Policy::uniform(), 0, 100);
    CHECK_THROWS(pc.validate());
    pc = two_arm(sim::Policy::uniform(), 100, 1000);
    CHECK(pc.resolved_calibration_reps() == 100);
    pc.reps = 10000;
    CHECK(pc.resolved_calibration_reps() == 1000);
}

TEST_CASE("AIT against ART on a small run") {
    ComparisonConfig cc;
    cc.policies = {sim::Policy::thompson(sim::RewardKind::Bernoulli), sim::Policy::ucb()};
    cc.spec = stats::TestSpec::two_sample_t(stats::Sidedness::OneSidedRight);
    cc.reps = 400;
    cc.art_resamples = 19;
    cc.horizon = 100;
    cc.seed = 3;
    const auto rows = power_comparison(cc);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.ait_power >= 0.0);
        CHECK(r.ait_power <= 1.0);
        CHECK(r.art_fpr <= 0.15);
    }
    // UCB resamples replay the observed history, so ART stays at alpha.
    CHECK(rows[1].art_power < 0.12);
    CHECK(rows[1].ait_power > rows[1].art_power);
    std::ostringstream os;
    write_csv(os, rows);
    CHECK(os.str().rfind("policy,art_power,ait_power,art_fpr,ait_fpr", 0) == 0);
}
