#include "aed/calibration/null_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aed::calibration {

NullEstimate estimate_null(double n, double reward_sum, double reward_sq_sum,
                           sim::RewardKind kind) {
    if (n <= 0.0) throw std::invalid_argument("cannot estimate the null from an empty history");
    const double mean = reward_sum / n;
    if (kind == sim::RewardKind::Bernoulli) {
        const double p = std::clamp(mean, 0.0, 1.0);
        return {sim::RewardKernel::bernoulli(p), p};
    }
    double sd = 0.0;
    if (n >= 2.0) sd = std::sqrt(std::max(0.0, (reward_sq_sum - n * mean * mean) / (n - 1.0)));
    sd = std::max(sd, kGaussianScaleFloor);
    return {sim::RewardKernel::gaussian(mean, sd), mean};
}

NullEstimate estimate_null(const sim::CompressedHistory& history, sim::RewardKind kind) {
    double n = 0.0;
    double s = 0.0;
    double s2 = 0.0;
    for (const auto& e : history.entries) {
        n += static_cast<double>(e.draws);
        s += e.reward_sum;
        s2 += e.reward_sq_sum;
    }
    return estimate_null(n, s, s2, kind);
}

}  // namespace aed::calibration
