#include "aed/power/prior.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace aed::power {

std::string_view to_string(PriorKind kind) {
    switch (kind) {
        case PriorKind::BetaIID: return "beta_iid";
        case PriorKind::GaussianIID: return "gaussian_iid";
        case PriorKind::FixedVector: return "fixed";
    }
    return "?";
}

PriorKind prior_kind_from_string(std::string_view name) {
    if (name == "beta_iid") return PriorKind::BetaIID;
    if (name == "gaussian_iid") return PriorKind::GaussianIID;
    if (name == "fixed") return PriorKind::FixedVector;
    throw std::invalid_argument("unknown prior kind '" + std::string(name) + "'");
}

PriorSpec PriorSpec::beta_iid(int arms, double a, double b) {
    PriorSpec p;
    p.kind = PriorKind::BetaIID;
    p.arms = arms;
    p.a = a;
    p.b = b;
    p.validate();
    return p;
}

PriorSpec PriorSpec::beta_moments(int arms, double location, double scale) {
    const double var = scale * scale;
    if (!(location > 0.0 && location < 1.0) || !(var > 0.0) ||
        var >= location * (1.0 - location)) {
        throw std::invalid_argument("no Beta distribution has this location and scale");
    }
    const double common = location * (1.0 - location) / var - 1.0;
    return beta_iid(arms, location * common, (1.0 - location) * common);
}

PriorSpec PriorSpec::gaussian_iid(int arms, double mean, double sd, double reward_scale) {
    PriorSpec p;
    p.kind = PriorKind::GaussianIID;
    p.arms = arms;
    p.mean = mean;
    p.sd = sd;
    p.reward_scale = reward_scale;
    p.reward_kind = sim::RewardKind::Gaussian;
    p.validate();
    return p;
}

PriorSpec PriorSpec::fixed_bernoulli(std::vector<double> means) {
    PriorSpec p;
    p.kind = PriorKind::FixedVector;
    p.arms = static_cast<int>(means.size());
    p.means = std::move(means);
    p.validate();
    return p;
}

PriorSpec PriorSpec::fixed_gaussian(std::vector<double> means, double reward_scale) {
    PriorSpec p;
    p.kind = PriorKind::FixedVector;
    p.arms = static_cast<int>(means.size());
    p.means = std::move(means);
    p.reward_scale = reward_scale;
    p.reward_kind = sim::RewardKind::Gaussian;
    p.validate();
    return p;
}

void PriorSpec::validate() const {
    if (arms < 2) throw std::invalid_argument("K must be >= 2");
    switch (kind) {
        case PriorKind::BetaIID:
            if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("Beta prior needs a, b > 0");
            if (reward_kind != sim::RewardKind::Bernoulli) {
                throw std::invalid_argument("Beta prior implies Bernoulli rewards");
            }
            break;
        case PriorKind::GaussianIID:
            if (!(sd >= 0.0)) throw std::invalid_argument("prior sd must be >= 0");
            if (!(reward_scale > 0.0)) throw std::invalid_argument("reward scale must be > 0");
            if (reward_kind != sim::RewardKind::Gaussian) {
                throw std::invalid_argument("Gaussian prior implies Gaussian rewards");
            }
            break;
        case PriorKind::FixedVector:
            if (static_cast<int>(means.size()) != arms) {
                throw std::invalid_argument("fixed prior needs one mean per arm");
            }
            if (reward_kind == sim::RewardKind::Gaussian && !(reward_scale > 0.0)) {
                throw std::invalid_argument("reward scale must be > 0");
            }
            if (reward_kind == sim::RewardKind::Bernoulli) {
                for (double m : means) {
                    if (!(m >= 0.0 && m <= 1.0)) {
                        throw std::invalid_argument("Bernoulli means must lie in [0, 1]");
                    }
                }
            }
            break;
    }
}

sim::ArmVector PriorSpec::draw(sim::Rng& rng) const {
    std::vector<double> mu(static_cast<std::size_t>(arms));
    switch (kind) {
        case PriorKind::BetaIID: {
            std::gamma_distribution<double> ga(a, 1.0);
            std::gamma_distribution<double> gb(b, 1.0);
            for (auto& m : mu) {
                const double x = ga(rng);
                const double y = gb(rng);
                m = x / (x + y);
            }
            return sim::ArmVector::bernoulli(mu);
        }
        case PriorKind::GaussianIID: {
            std::normal_distribution<double> n(mean, sd);
            for (auto& m : mu) m = sd > 0.0 ? n(rng) : mean;
            return sim::ArmVector::gaussian(mu, reward_scale);
        }
        case PriorKind::FixedVector:
            if (reward_kind == sim::RewardKind::Bernoulli) return sim::ArmVector::bernoulli(means);
            return sim::ArmVector::gaussian(means, reward_scale);
    }
    throw std::logic_error("unhandled prior kind");
}

}  // namespace aed::power
