#pragma once

#include <string_view>
#include <vector>

#include "aed/sim/reward.hpp"
#include "aed/sim/rng.hpp"

namespace aed::power {

enum class PriorKind { BetaIID, GaussianIID, FixedVector };

std::string_view to_string(PriorKind kind);
PriorKind prior_kind_from_string(std::string_view name);

/// Distribution over arm-mean vectors used by power analysis.
///   BetaIID: mu_k ~ Beta(a, b), Bernoulli rewards.
///   GaussianIID: mu_k ~ N(mean, sd^2), rewards N(mu_k, reward_scale^2).
///   FixedVector: the given means, Bernoulli or Gaussian with reward_scale.
struct PriorSpec {
    PriorKind kind = PriorKind::FixedVector;
    int arms = 2;
    double a = 1.0;
    double b = 1.0;
    double mean = 0.0;
    double sd = 0.0;
    double reward_scale = 1.0;
    sim::RewardKind reward_kind = sim::RewardKind::Bernoulli;
    std::vector<double> means;

    static PriorSpec beta_iid(int arms, double a, double b);
    /// Beta parameters matching a location and scale by the method of moments.
    static PriorSpec beta_moments(int arms, double location, double scale);
    static PriorSpec gaussian_iid(int arms, double mean, double sd, double reward_scale);
    static PriorSpec fixed_bernoulli(std::vector<double> means);
    static PriorSpec fixed_gaussian(std::vector<double> means, double reward_scale);

    void validate() const;
    sim::ArmVector draw(sim::Rng& rng) const;
};

}  // namespace aed::power
