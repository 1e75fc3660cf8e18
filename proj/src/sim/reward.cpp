#include "aed/sim/reward.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aed::sim {

std::string_view to_string(RewardKind kind) {
    return kind == RewardKind::Bernoulli ? "bernoulli" : "gaussian";
}

RewardKind reward_kind_from_string(std::string_view name) {
    if (name == "bernoulli") return RewardKind::Bernoulli;
    if (name == "gaussian") return RewardKind::Gaussian;
    throw std::invalid_argument("unknown reward kind '" + std::string(name) + "'");
}

RewardKernel RewardKernel::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("Bernoulli mean must lie in [0, 1]");
    }
    return RewardKernel(RewardKind::Bernoulli, p, 0.0);
}

RewardKernel RewardKernel::gaussian(double mean, double scale) {
    if (!(scale > 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("Gaussian kernel needs a finite mean and scale > 0");
    }
    return RewardKernel(RewardKind::Gaussian, mean, scale);
}

double RewardKernel::sample(Rng& rng) const {
    if (kind_ == RewardKind::Bernoulli) {
        return uniform01(rng) < mean_ ? 1.0 : 0.0;
    }
    return std::normal_distribution<double>(mean_, scale_)(rng);
}

RewardAggregate RewardKernel::sample_aggregate(int m, Rng& rng) const {
    if (m <= 0) return {};
    if (m == 1) {
        const double r = sample(rng);
        return {r, r * r};
    }
    if (kind_ == RewardKind::Bernoulli) {
        const double s = std::binomial_distribution<int>(m, mean_)(rng);
        return {s, s};
    }
    // sum ~ N(m mu, m sigma^2); sum of squared deviations ~ sigma^2 chi2(m-1),
    // independent of the sample mean.
    const double md = static_cast<double>(m);
    const double mean = std::normal_distribution<double>(mean_, scale_ / std::sqrt(md))(rng);
    const double spread =
        std::gamma_distribution<double>(0.5 * (md - 1.0), 2.0 * scale_ * scale_)(rng);
    return {md * mean, spread + md * mean * mean};
}

double RewardKernel::log_density(double reward) const {
    if (kind_ == RewardKind::Bernoulli) {
        if (reward != 0.0 && reward != 1.0) return -std::numeric_limits<double>::infinity();
        const double p = reward == 1.0 ? mean_ : 1.0 - mean_;
        return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
    const double z = (reward - mean_) / scale_;
    return -0.5 * z * z - std::log(scale_) - 0.5 * std::log(2.0 * std::numbers::pi);
}

ArmVector::ArmVector(std::vector<RewardKernel> kernels) : kernels_(std::move(kernels)) {
    if (kernels_.size() < 2) {
        throw std::invalid_argument("K must be >= 2");
    }
    for (const auto& k : kernels_) {
        if (k.kind() != kernels_.front().kind()) {
            throw std::invalid_argument("all arms must share one reward kind");
        }
    }
}

ArmVector ArmVector::bernoulli(std::span<const double> means) {
    std::vector<RewardKernel> k;
    k.reserve(means.size());
    for (double p : means) k.push_back(RewardKernel::bernoulli(p));
    return ArmVector(std::move(k));
}

ArmVector ArmVector::gaussian(std::span<const double> means, double scale) {
    std::vector<RewardKernel> k;
    k.reserve(means.size());
    for (double mu : means) k.push_back(RewardKernel::gaussian(mu, scale));
    return ArmVector(std::move(k));
}

ArmVector ArmVector::identical(const RewardKernel& kernel, int arms) {
    return ArmVector(std::vector<RewardKernel>(static_cast<std::size_t>(arms), kernel));
}

std::vector<double> ArmVector::means() const {
    std::vector<double> out;
    out.reserve(kernels_.size());
    for (const auto& k : kernels_) out.push_back(k.mean());
    return out;
}

}  // namespace aed::sim
