#include "aed/stats/classical.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace aed::stats {

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

double f_quantile(double p, double df1, double df2) {
    return boost::math::quantile(boost::math::fisher_f_distribution<double>(df1, df2), p);
}

double studentized_range_cdf(double q, int k) {
    if (q <= 0.0) return 0.0;
    const boost::math::normal_distribution<double> z(0.0, 1.0);
    // P(range <= q) = k * int phi(x) [Phi(x) - Phi(x - q)]^(k-1) dx
    auto integrand = [&](double x) {
        const double inner = boost::math::cdf(z, x) - boost::math::cdf(z, x - q);
        return boost::math::pdf(z, x) * std::pow(inner, k - 1);
    };
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, -10.0, 10.0 + q, 15, 1e-12);
    return std::min(1.0, k * v);
}

double studentized_range_quantile(double p, int k) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
    auto f = [&](double q) { return studentized_range_cdf(q, k) - p; };
    boost::math::tools::eps_tolerance<double> tol(40);
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::bisect(f, 1e-6, 20.0, tol, iters);
    return 0.5 * (lo + hi);
}

double classical_threshold(const TestSpec& spec, int arms, std::int64_t total_draws,
                           double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    switch (spec.kind) {
        case TestKind::TwoSampleT:
        case TestKind::TConstant:
        case TestKind::TControl:
            return spec.effective_sidedness() == Sidedness::TwoSided
                       ? normal_quantile(1.0 - alpha / 2.0)
                       : normal_quantile(1.0 - alpha);
        case TestKind::ANOVA: {
            const double df2 = static_cast<double>(total_draws - arms);
            if (df2 <= 0.0) return std::numeric_limits<double>::infinity();
            return f_quantile(1.0 - alpha, arms - 1.0, df2);
        }
        case TestKind::TukeyBest:
            return studentized_range_quantile(1.0 - alpha, arms) / std::numbers::sqrt2;
        case TestKind::LRT:
            break;
    }
    throw std::invalid_argument("no classical threshold for this test kind");
}

}  // namespace aed::stats
