#include <doctest.h>

#include <chrono>
#include <cmath>
#include <set>
#include <vector>

#include "aed/objective/design.hpp"
#include "aed/objective/ecp.hpp"

using namespace aed;
using namespace aed::objective;

namespace {

DesignPoint point(double phi, std::int64_t horizon, double reward, bool feasible = true) {
    DesignPoint p;
    p.phi = phi;
    p.horizon = horizon;
    p.mean_reward = reward;
    p.feasible = feasible;
    return p;
}

std::vector<DesignPoint> synthetic() {
    return {point(0.0, 4000, 0.83), point(0.2, 1600, 0.82), point(0.4, 1100, 0.815),
            point(0.6, 950, 0.81), point(1.0, 900, 0.80), point(0.8, 50, 0.9, false)};
}

DesignConfig small_design() {
    DesignConfig d;
    d.base.prior = power::PriorSpec::fixed_bernoulli({0.7, 0.3});
    d.base.spec = stats::TestSpec::two_sample_t(stats::Sidedness::TwoSided);
    d.base.horizon = 300;
    d.base.reps = 200;
    d.base.seed = 7;
    d.phis = {0.0, 0.5, 1.0};
    return d;
}

}  // namespace

TEST_CASE("ecp values") {
    CHECK(ecp(906, 0.8100, 0.01) == doctest::Approx(0.7419).epsilon(1e-4));
    CHECK(ecp(4186, 0.8251, 0.01) == doctest::Approx(0.7417).epsilon(1e-4));
    CHECK(ecp(906, 0.81, 0.01) == doctest::Approx(0.81 - 0.01 * std::log(906.0)));
    CHECK(ecp(1234, 0.77, 0.0) == 0.77);
}

TEST_CASE("property suite") {
    const auto start = std::chrono::steady_clock::now();
    const auto report = ecp_property_suite(1, 10000);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& c : report.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
    }
    CHECK(report.passed());
    CHECK(report.checks.size() >= 5);
    CHECK(seconds < 5.0);
}

TEST_CASE("dominated design counterexample") {
    CHECK(ecp_cumulative(100, 50, 0.2) > ecp_cumulative(101, 50.3, 0.2));
    CHECK(linear_objective(101, 50.3, 0.2) > linear_objective(100, 50, 0.2));
}

TEST_CASE("recommendation") {
    const auto pts = synthetic();
    SUBCASE("w = 0 picks the highest feasible reward") {
        CHECK(recommend(pts, 0.0).phi == 0.0);
    }
    SUBCASE("huge w picks the shortest feasible design") {
        CHECK(recommend(pts, 1e6).phi == 1.0);
    }
    SUBCASE("infeasible points are never chosen but stay listed") {
        const auto rec = recommend(pts, 0.01);
        CHECK(rec.phi != 0.8);
        CHECK(rec.points.size() == pts.size());
        CHECK(rec.feasible_set().size() == 5);
        CHECK(rec.ecp == doctest::Approx(ecp(rec.horizon, rec.mean_reward, 0.01)));
    }
    SUBCASE("ties go to the smaller phi") {
        std::vector<DesignPoint> tie{point(0.5, 100, 0.7), point(0.1, 100, 0.7)};
        CHECK(recommend(tie, 0.01).phi == 0.1);
    }
    SUBCASE("nothing feasible") {
        std::vector<DesignPoint> none{point(0.0, 10, 0.5, false)};
        CHECK_THROWS_WITH_AS(recommend(none, 0.01), "no design meets power constraint within T_max",
                             InfeasibleDesign);
    }
}

TEST_CASE("re-scoring at a new w") {
    const auto pts = synthetic();
    for (double w : {0.0, 0.001, 0.01, 0.05, 0.3}) {
        const auto at = ecp_at(pts, w);
        CHECK(at.best_phi == recommend(pts, w).phi);
        double best = -INFINITY;
        for (double r : at.relative) {
            CHECK(r <= 0.0);
            best = std::max(best, r);
        }
        CHECK(best == 0.0);
    }
}

TEST_CASE("relative curves") {
    const auto pts = synthetic();
    const auto grid = default_w_grid();
    CHECK(grid.size() == 50);
    CHECK(grid.front() == 1e-4);
    CHECK(grid.back() == 1.0);
    const auto curves = relative_ecp_curve(pts, grid);
    CHECK(curves.phis.size() == 5);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        int touching = 0;
        for (const auto& row : curves.relative) {
            CHECK(row[j] <= 0.0);
            touching += row[j] == 0.0;
        }
        CHECK(touching == 1);
    }
    // The best design is an upper envelope of lines in w: once a phi is
    // overtaken it never comes back.
    std::set<double> left;
    for (std::size_t j = 1; j < grid.size(); ++j) {
        if (curves.best_phi[j] != curves.best_phi[j - 1]) left.insert(curves.best_phi[j - 1]);
        CHECK(left.count(curves.best_phi[j]) == 0);
    }
    CHECK_THROWS(default_w_grid(1));
}

TEST_CASE("design search on a simulated problem") {
    auto d = small_design();
    d.w = 0.01;
    const auto points = evaluate_designs(d);
    REQUIRE(points.size() == 3);
    for (const auto& p : points) {
        CHECK(p.horizon <= 300);
        if (!p.feasible) CHECK(p.horizon == 300);
    }

    SUBCASE("a vacuous power target is met almost immediately") {
        auto easy = small_design();
        easy.beta_target = 0.999;
        for (const auto& p : evaluate_designs(easy)) {
            CHECK(p.feasible);
            CHECK(p.horizon < 20);
        }
    }
    SUBCASE("an impossible target is infeasible") {
        auto hard = small_design();
        hard.base.prior = power::PriorSpec::fixed_bernoulli({0.505, 0.495});
        hard.base.horizon = 10;
        CHECK_THROWS_AS(obj_opt(hard), InfeasibleDesign);
    }
    SUBCASE("invalid phi lists") {
        auto bad = small_design();
        bad.phis.clear();
        CHECK_THROWS(bad.validate());
        bad.phis = {1.5};
        CHECK_THROWS(bad.validate());
    }
}

TEST_CASE("post-experiment evaluation") {
    const auto flat = power::PriorSpec::fixed_bernoulli({0.3, 0.3, 0.3});
    const auto pe = post_experiment_eval(sim::Policy::thompson(sim::RewardKind::Bernoulli), 200,
                                         flat, 0.01, 1000, 3);
    CHECK(pe.mean_reward == doctest::Approx(0.3).epsilon(0.02));
    CHECK(pe.ecp == doctest::Approx(ecp(200, pe.mean_reward, 0.01)).epsilon(0.01));
}

TEST_CASE("family policies") {
    const auto base = sim::Policy::thompson(sim::RewardKind::Gaussian);
    const auto p = family_policy(PolicyFamily::EpsTS, 0.3, base);
    CHECK(p.kind == sim::PolicyKind::EpsTS);
    CHECK(p.epsilon == 0.3);
    CHECK(p.reward_kind == sim::RewardKind::Gaussian);
    CHECK(family_policy(PolicyFamily::EpsGreedy, 0.1, base).kind == sim::PolicyKind::EpsGreedy);
    CHECK_THROWS(family_policy(PolicyFamily::EpsTS, -0.1, base));
}
