#pragma once

#include <string>
#include <string_view>

#include "aed/sim/history.hpp"
#include "aed/sim/reward.hpp"
#include "aed/sim/rng.hpp"

namespace aed::sim {

enum class PolicyKind { UR, TS, EpsTS, EpsGreedy, UCB };

std::string_view to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(std::string_view name);

struct BetaPrior {
    double a = 1.0;
    double b = 1.0;
};

/// Normal-Inverse-Gamma prior: mu | sigma^2 ~ N(mean, sigma^2 / kappa),
/// sigma^2 ~ InvGamma(shape, rate).
struct NigPrior {
    double mean = 0.0;
    double kappa = 0.001;
    double shape = 0.5;
    double rate = 0.1;
};

/// Arm-selection rule.  Thompson variants pick the conjugate model from
/// `reward_kind`.  Argmax selections break ties toward the lowest index
/// unless `random_ties` is set, in which case a tied arm is drawn uniformly.
struct Policy {
    PolicyKind kind = PolicyKind::UR;
    double epsilon = 0.0;
    RewardKind reward_kind = RewardKind::Bernoulli;
    BetaPrior beta_prior{};
    NigPrior nig_prior{};
    double ucb_c = 2.0;  // index = mean + sqrt(ucb_c * ln(t) / n)
    bool random_ties = false;

    static Policy uniform() { return {PolicyKind::UR}; }
    static Policy thompson(RewardKind rk) { return {PolicyKind::TS, 0.0, rk}; }
    static Policy eps_thompson(double eps, RewardKind rk) { return {PolicyKind::EpsTS, eps, rk}; }
    static Policy eps_greedy(double eps) { return {PolicyKind::EpsGreedy, eps}; }
    static Policy ucb() { return {PolicyKind::UCB}; }

    /// True when the choice is a function of the state alone.
    bool deterministic() const { return kind == PolicyKind::UCB && !random_ties; }

    int select(const PolicyState& state, Rng& rng) const;

    std::string label() const;
};

/// One posterior draw of an arm's mean under the policy's conjugate prior.
double posterior_sample(const Policy& policy, const ArmTotals& arm, Rng& rng);

}  // namespace aed::sim
