#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "aed/sim/rng.hpp"

namespace aed::sim {

enum class RewardKind { Bernoulli, Gaussian };

std::string_view to_string(RewardKind kind);
RewardKind reward_kind_from_string(std::string_view name);

/// Aggregated draws from one kernel: the sum and sum of squares of m rewards.
struct RewardAggregate {
    double sum = 0.0;
    double sq_sum = 0.0;
};

/// Per-arm reward distribution.  `scale` is the standard deviation and is
/// ignored for Bernoulli kernels.
class RewardKernel {
public:
    static RewardKernel bernoulli(double p);
    static RewardKernel gaussian(double mean, double scale);

    RewardKind kind() const { return kind_; }
    double mean() const { return mean_; }
    double scale() const { return scale_; }

    double sample(Rng& rng) const;

    /// Sum and sum of squares of m i.i.d. draws, sampled from their exact
    /// joint law (binomial count; or normal mean plus scaled chi-square
    /// spread) instead of m separate draws.
    RewardAggregate sample_aggregate(int m, Rng& rng) const;

    /// log p(r) under this kernel; -inf outside the support.
    double log_density(double reward) const;

    friend bool operator==(const RewardKernel&, const RewardKernel&) = default;

private:
    RewardKernel(RewardKind kind, double mean, double scale)
        : kind_(kind), mean_(mean), scale_(scale) {}

    RewardKind kind_;
    double mean_;
    double scale_;
};

/// Ordered per-arm kernels, K >= 2, all of one kind.
class ArmVector {
public:
    explicit ArmVector(std::vector<RewardKernel> kernels);

    static ArmVector bernoulli(std::span<const double> means);
    static ArmVector gaussian(std::span<const double> means, double scale);
    /// K copies of one kernel (the shared null distribution).
    static ArmVector identical(const RewardKernel& kernel, int arms);

    int size() const { return static_cast<int>(kernels_.size()); }
    RewardKind kind() const { return kernels_.front().kind(); }
    const RewardKernel& operator[](int arm) const { return kernels_[static_cast<std::size_t>(arm)]; }
    std::span<const RewardKernel> kernels() const { return kernels_; }
    std::vector<double> means() const;

private:
    std::vector<RewardKernel> kernels_;
};

}  // namespace aed::sim
