#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "aed/sim/parallel.hpp"
#include "aed/sim/policy.hpp"
#include "aed/sim/rng.hpp"
#include "aed/sim/runner.hpp"

using namespace aed::sim;

namespace {

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<std::int64_t> pulls(const CompressedHistory& h) {
    std::vector<std::int64_t> out(static_cast<std::size_t>(h.arms), 0);
    for (const auto& e : h.entries) out[static_cast<std::size_t>(e.arm)] += e.draws;
    return out;
}

double total_reward(const CompressedHistory& h) {
    double s = 0;
    for (const auto& e : h.entries) s += e.reward_sum;
    return s;
}

}  // namespace

TEST_CASE("derive_stream is deterministic and separates replications") {
    auto a = derive_stream(42, 0, StageTag::kExperiment);
    auto b = derive_stream(42, 0, StageTag::kExperiment);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());

    auto c = derive_stream(42, 0, StageTag::kExperiment);
    auto d = derive_stream(42, 1, StageTag::kExperiment);
    std::vector<double> x, y;
    for (int i = 0; i < 1000; ++i) {
        x.push_back(uniform01(c));
        y.push_back(uniform01(d));
    }
    CHECK(std::abs(correlation(x, y)) < 0.1);

    auto e = derive_stream(42, 0, StageTag::kExperiment);
    auto f = derive_stream(43, 0, StageTag::kExperiment);
    CHECK(e() != f());

    auto g = derive_stream(42, 0, StageTag::kPolicy);
    auto h = derive_stream(42, 0, StageTag::kExperiment);
    CHECK(g() != h());
}

TEST_CASE("policy selection rules") {
    SUBCASE("uniform randomization") {
        PolicyState s(2);
        auto rng = derive_stream(1, 0, StageTag::kPolicy);
        int zeros = 0;
        for (int i = 0; i < 10000; ++i) zeros += Policy::uniform().select(s, rng) == 0;
        CHECK(std::abs(zeros / 10000.0 - 0.5) < 0.02);
    }
    SUBCASE("UCB pulls an unpulled arm first") {
        PolicyState s(2);
        auto rng = derive_stream(1, 0, StageTag::kPolicy);
        CHECK(Policy::ucb().select(s, rng) == 0);
        s.record(0, 1.0, 1.0, 1);
        CHECK(Policy::ucb().select(s, rng) == 1);
    }
    SUBCASE("greedy argmax") {
        PolicyState s(2);
        s.record(0, 9.0, 9.0, 10);
        s.record(1, 1.0, 1.0, 10);
        auto rng = derive_stream(1, 0, StageTag::kPolicy);
        for (int i = 0; i < 50; ++i) CHECK(Policy::eps_greedy(0.0).select(s, rng) == 0);
    }
    SUBCASE("deterministic flag") {
        CHECK(Policy::ucb().deterministic());
        auto p = Policy::ucb();
        p.random_ties = true;
        CHECK_FALSE(p.deterministic());
        CHECK_FALSE(Policy::thompson(RewardKind::Bernoulli).deterministic());
    }
    SUBCASE("names round trip") {
        for (auto k : {PolicyKind::UR, PolicyKind::TS, PolicyKind::EpsTS, PolicyKind::EpsGreedy,
                       PolicyKind::UCB}) {
            CHECK(policy_kind_from_string(to_string(k)) == k);
        }
        CHECK_THROWS(policy_kind_from_string("softmax"));
    }
}

TEST_CASE("eps-TS(1) behaves as uniform randomization") {
    PolicyState s(2);
    s.record(0, 95.0, 95.0, 100);
    s.record(1, 5.0, 5.0, 100);
    auto rng = derive_stream(3, 0, StageTag::kPolicy);
    int zeros = 0;
    const auto p = Policy::eps_thompson(1.0, RewardKind::Bernoulli);
    for (int i = 0; i < 10000; ++i) zeros += p.select(s, rng) == 0;
    CHECK(std::abs(zeros / 10000.0 - 0.5) < 0.02);
}

TEST_CASE("exact runner") {
    const auto ones = ArmVector::bernoulli(std::vector<double>{1.0, 1.0});
    for (const auto& p : {Policy::uniform(), Policy::thompson(RewardKind::Bernoulli),
                          Policy::eps_greedy(0.1), Policy::ucb()}) {
        auto rng = derive_stream(5, 0, StageTag::kExperiment);
        const auto h = run_exact(ones, 10, p, rng);
        CHECK(h.horizon_reached == 10);
        CHECK(total_reward(h) == doctest::Approx(10.0));
    }

    SUBCASE("uniform allocation over three arms") {
        const auto arms = ArmVector::bernoulli(std::vector<double>{0.3, 0.5, 0.7});
        auto rng = derive_stream(6, 0, StageTag::kExperiment);
        const auto h = run_exact(arms, 300, Policy::uniform(), rng);
        for (auto n : pulls(h)) CHECK(std::abs(n - 100) <= 25);
    }

    SUBCASE("TS beats uniform on average") {
        const auto arms = ArmVector::bernoulli(std::vector<double>{0.6, 0.4});
        double sum = 0;
        const int reps = 2000;
        for (int r = 0; r < reps; ++r) {
            auto rng = derive_stream(7, static_cast<std::uint64_t>(r), StageTag::kExperiment);
            sum += total_reward(run_exact(arms, 200, Policy::thompson(RewardKind::Bernoulli), rng)) / 200.0;
        }
        const double mean = sum / reps;
        CHECK(mean > 0.5);
        CHECK(mean < 0.6);
    }
}

TEST_CASE("batch schedule") {
    CHECK(batch_schedule(0) == BatchSchedule{1, 1, 1});
    // s = round(1 + 5) = 6, n = round(6^(1/3) = 1.82) = 2, m = round(3) = 3
    CHECK(batch_schedule(100) == BatchSchedule{6, 2, 3});
    // s = 11, n = round(2.22) = 2, m = round(5.5) = 6 under half-to-even
    CHECK(batch_schedule(200) == BatchSchedule{11, 2, 6});
    CHECK(round_half_even(2.5) == 2.0);
    CHECK(round_half_even(3.5) == 4.0);
    CHECK(round_half_even(-0.5) == 0.0);
    CHECK(round_half_even(1.2) == 1.0);
}

TEST_CASE("batched runner") {
    const auto ones = ArmVector::bernoulli(std::vector<double>{1.0, 1.0});
    SUBCASE("T=1 matches a single exact step") {
        auto r1 = derive_stream(8, 0, StageTag::kExperiment);
        auto r2 = derive_stream(8, 0, StageTag::kExperiment);
        const auto b = run_batched(ones, 1, Policy::uniform(), r1);
        const auto e = run_exact(ones, 1, Policy::uniform(), r2);
        REQUIRE(b.entries.size() == 1);
        CHECK(b.entries[0].draws == 1);
        CHECK(b.horizon_reached == e.horizon_reached);
    }
    SUBCASE("deterministic rewards fill every entry") {
        auto rng = derive_stream(9, 0, StageTag::kExperiment);
        const auto h = run_batched(ones, 500, Policy::thompson(RewardKind::Bernoulli), rng);
        CHECK(h.horizon_reached >= 500);
        for (const auto& e : h.entries) CHECK(e.reward_sum == doctest::Approx(static_cast<double>(e.draws)));
    }
    SUBCASE("checkpoints depend only on T") {
        // The last checkpoint may overshoot T, like the final batch.
        const auto cps = checkpoints(RunnerMode::Batched, 300);
        const auto arms = ArmVector::bernoulli(std::vector<double>{0.6, 0.4});
        for (std::uint64_t r = 0; r < 5; ++r) {
            auto rng = derive_stream(10, r, StageTag::kExperiment);
            const auto h = run_batched(arms, 300, Policy::thompson(RewardKind::Bernoulli), rng);
            std::int64_t cum = 0;
            std::size_t k = 0;
            for (const auto& e : h.entries) {
                cum += e.draws;
                REQUIRE(k < cps.size());
                CHECK(cps[k++] == cum);
            }
            CHECK(k == cps.size());
        }
        const auto exact = checkpoints(RunnerMode::Exact, 7);
        CHECK(exact == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7});
    }
    SUBCASE("step_to_checkpoint maps each step to the last boundary at or before it") {
        const std::vector<std::int64_t> cps{1, 3, 6};
        const auto m = step_to_checkpoint(cps, 7);
        CHECK(m == std::vector<std::int32_t>{0, 0, 1, 1, 1, 2, 2});
    }
}

TEST_CASE("compressed history helpers") {
    CompressedHistory h;
    h.arms = 2;
    h.append({0, 3.0, 3.0, 4});
    h.append({1, 1.0, 1.0, 2});
    CHECK(h.horizon_reached == 6);
    CHECK(h.entries_within(3) == 0);
    CHECK(h.entries_within(4) == 1);
    CHECK(h.entries_within(6) == 2);
    CHECK(h.cumulative_reward(4) == doctest::Approx(3.0));
    CHECK(h.cumulative_reward(5) == doctest::Approx(3.5));
    const auto s = h.replay();
    CHECK(s[0].pulls == 4);
    CHECK(s[1].reward_sum == 1.0);
    CHECK(s.total_t() == 6);
}

TEST_CASE("run_with_rewards feeds the time-indexed sequence") {
    const std::vector<double> rewards{1, 0, 1, 1, 0, 1};
    auto rng = derive_stream(11, 0, StageTag::kResample);
    const auto h = run_with_rewards(2, rewards, Policy::uniform(), rng);
    REQUIRE(h.entries.size() == rewards.size());
    for (std::size_t t = 0; t < rewards.size(); ++t) CHECK(h.entries[t].reward_sum == rewards[t]);
}

TEST_CASE("reward kernels") {
    auto rng = derive_stream(12, 0, StageTag::kExperiment);
    const auto g = RewardKernel::gaussian(0.3, 2.0);
    double s = 0, ss = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto a = g.sample_aggregate(5, rng);
        s += a.sum;
        ss += a.sq_sum;
    }
    // E[sum] = 5 mu, E[sum of squares] = 5 (sigma^2 + mu^2)
    CHECK(s / n == doctest::Approx(1.5).epsilon(0.05));
    CHECK(ss / n == doctest::Approx(5 * (4.0 + 0.09)).epsilon(0.02));
    CHECK(RewardKernel::bernoulli(0.5).log_density(2.0) == -INFINITY);
    CHECK(RewardKernel::bernoulli(0.6).log_density(1.0) == doctest::Approx(std::log(0.6)));
    CHECK_THROWS(ArmVector(std::vector<RewardKernel>{RewardKernel::bernoulli(0.5)}));
}

TEST_CASE("parallel_for output does not depend on jobs") {
    std::vector<double> one(1000), four(1000);
    auto body = [](std::vector<double>& out) {
        return [&out](std::size_t i) {
            auto rng = derive_stream(13, i, StageTag::kExperiment);
            out[i] = uniform01(rng);
        };
    };
    parallel_for(1000, Execution{1, {}}, body(one));
    parallel_for(1000, Execution{4, {}}, body(four));
    CHECK(one == four);
    CHECK_THROWS(parallel_for(100, Execution{2, {}}, [](std::size_t i) {
        if (i == 50) throw std::runtime_error("boom");
    }));
}
