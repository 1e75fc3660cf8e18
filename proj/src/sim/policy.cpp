#include "aed/sim/policy.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace aed::sim {
namespace {

int uniform_arm(int arms, Rng& rng) {
    return std::uniform_int_distribution<int>(0, arms - 1)(rng);
}

int first_unpulled(const PolicyState& state) {
    for (int a = 0; a < state.arms(); ++a) {
        if (state[a].pulls == 0) return a;
    }
    return -1;
}

double beta_sample(double a, double b, Rng& rng) {
    const double x = std::gamma_distribution<double>(a, 1.0)(rng);
    const double y = std::gamma_distribution<double>(b, 1.0)(rng);
    return x / (x + y);
}

int thompson_choice(const Policy& policy, const PolicyState& state, Rng& rng) {
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < state.arms(); ++a) {
        const double v = posterior_sample(policy, state[a], rng);
        if (v > best_value) {
            best_value = v;
            best = a;
        }
    }
    return best;
}

/// Argmax of score(a).  With random ties a uniformly chosen maximiser is
/// returned (reservoir sampling over the tied set).
template <class Score>
int argmax(int arms, bool random_ties, Rng& rng, Score&& score) {
    int best = 0;
    int tied = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < arms; ++a) {
        const double v = score(a);
        if (v > best_value) {
            best_value = v;
            best = a;
            tied = 1;
        } else if (random_ties && v == best_value) {
            ++tied;
            if (std::uniform_int_distribution<int>(0, tied - 1)(rng) == 0) best = a;
        }
    }
    return best;
}

int greedy_choice(const Policy& policy, const PolicyState& state, Rng& rng) {
    if (int a = first_unpulled(state); a >= 0) return a;
    return argmax(state.arms(), policy.random_ties, rng, [&](int a) {
        return state[a].reward_sum / static_cast<double>(state[a].pulls);
    });
}

int ucb_choice(const Policy& policy, const PolicyState& state, Rng& rng) {
    if (int a = first_unpulled(state); a >= 0) return a;
    const double log_t = std::log(static_cast<double>(state.total_t()));
    return argmax(state.arms(), policy.random_ties, rng, [&](int a) {
        const double n = static_cast<double>(state[a].pulls);
        return state[a].reward_sum / n + std::sqrt(policy.ucb_c * log_t / n);
    });
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::UR: return "ur";
        case PolicyKind::TS: return "ts";
        case PolicyKind::EpsTS: return "eps_ts";
        case PolicyKind::EpsGreedy: return "eps_greedy";
        case PolicyKind::UCB: return "ucb";
    }
    return "?";
}

PolicyKind policy_kind_from_string(std::string_view name) {
    if (name == "ur") return PolicyKind::UR;
    if (name == "ts") return PolicyKind::TS;
    if (name == "eps_ts") return PolicyKind::EpsTS;
    if (name == "eps_greedy") return PolicyKind::EpsGreedy;
    if (name == "ucb") return PolicyKind::UCB;
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

double posterior_sample(const Policy& policy, const ArmTotals& arm, Rng& rng) {
    if (policy.reward_kind == RewardKind::Bernoulli) {
        const double n = static_cast<double>(arm.pulls);
        return beta_sample(policy.beta_prior.a + arm.reward_sum,
                           policy.beta_prior.b + n - arm.reward_sum, rng);
    }
    const NigPrior& p = policy.nig_prior;
    const double n = static_cast<double>(arm.pulls);
    double mean = p.mean;
    double kappa = p.kappa;
    double shape = p.shape;
    double rate = p.rate;
    if (arm.pulls > 0) {
        const double xbar = arm.reward_sum / n;
        const double ss = std::max(0.0, arm.reward_sq_sum - n * xbar * xbar);
        kappa = p.kappa + n;
        mean = (p.kappa * p.mean + n * xbar) / kappa;
        shape = p.shape + 0.5 * n;
        rate = p.rate + 0.5 * ss + 0.5 * p.kappa * n * (xbar - p.mean) * (xbar - p.mean) / kappa;
    }
    const double precision = std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
    return std::normal_distribution<double>(mean, 1.0 / std::sqrt(precision * kappa))(rng);
}

int Policy::select(const PolicyState& state, Rng& rng) const {
    const int arms = state.arms();
    switch (kind) {
        case PolicyKind::UR:
            return uniform_arm(arms, rng);
        case PolicyKind::TS:
            return thompson_choice(*this, state, rng);
        case PolicyKind::EpsTS:
            // epsilon == 0 consumes no exploration coin, so it replays TS exactly.
            if (epsilon > 0.0 && uniform01(rng) < epsilon) return uniform_arm(arms, rng);
            return thompson_choice(*this, state, rng);
        case PolicyKind::EpsGreedy:
            if (epsilon > 0.0 && uniform01(rng) < epsilon) return uniform_arm(arms, rng);
            return greedy_choice(*this, state, rng);
        case PolicyKind::UCB:
            return ucb_choice(*this, state, rng);
    }
    throw std::logic_error("unhandled policy kind");
}

std::string Policy::label() const {
    switch (kind) {
        case PolicyKind::UR: return "UR";
        case PolicyKind::TS: return "TS";
        case PolicyKind::UCB: return "UCB";
        case PolicyKind::EpsTS:
        case PolicyKind::EpsGreedy: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%s(%.2g)",
                          kind == PolicyKind::EpsTS ? "eps-TS" : "eps-greedy", epsilon);
            return buf;
        }
    }
    return "?";
}

}  // namespace aed::sim
