#include "aed/objective/ecp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "aed/sim/rng.hpp"

namespace aed::objective {

double ecp(std::int64_t horizon, double mean_reward, double w) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    return mean_reward - w * std::log(static_cast<double>(horizon));
}

double ecp_cumulative(double horizon, double cumulative_reward, double w) {
    return cumulative_reward / horizon - w * std::log(horizon);
}

double linear_objective(double horizon, double cumulative_reward, double w) {
    return cumulative_reward - w * horizon;
}

bool PropertyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

namespace {

std::string fmt(const char* f, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

PropertyReport ecp_property_suite(std::uint64_t seed, std::int64_t points) {
    sim::Rng rng = sim::derive_stream(seed, 0, sim::StageTag::kOracle);
    std::uniform_real_distribution<double> horizon_dist(2.0, 10000.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> int_horizon(2, 10000);
    PropertyReport report;

    // Iso-value trade-off: dF/dT + dF/dR * (R/T + w) = 0.
    double worst = 0.0;
    for (std::int64_t i = 0; i < points; ++i) {
        const double t = horizon_dist(rng);
        const double r = unit(rng) * t;
        const double w = unit(rng);
        const double ht = 1e-3 * t;
        const double hr = 1e-3 * std::max(1.0, r);
        const double dfdt =
            (ecp_cumulative(t + ht, r, w) - ecp_cumulative(t - ht, r, w)) / (2.0 * ht);
        const double dfdr =
            (ecp_cumulative(t, r + hr, w) - ecp_cumulative(t, r - hr, w)) / (2.0 * hr);
        worst = std::max(worst, std::fabs(dfdt + dfdr * (r / t + w)));
    }
    report.checks.push_back({"pde_residual", worst < 1e-6, fmt("max |residual| = %.3g", worst)});

    // Monotonicity in T (w > 0) and in mean reward.
    std::int64_t bad_t = 0;
    std::int64_t bad_r = 0;
    for (std::int64_t i = 0; i < points; ++i) {
        const std::int64_t t = int_horizon(rng);
        const double r = unit(rng);
        const double w = 1e-3 + unit(rng);
        if (!(ecp(t + 1, r, w) < ecp(t, r, w))) ++bad_t;
        if (!(ecp(t, r + 1e-3, w) > ecp(t, r, w))) ++bad_r;
    }
    report.checks.push_back(
        {"monotone_in_T", bad_t == 0, fmt("%.0f violations", static_cast<double>(bad_t))});
    report.checks.push_back(
        {"monotone_in_reward", bad_r == 0, fmt("%.0f violations", static_cast<double>(bad_r))});

    // Ordering invariance under R -> R + bT and (R, w) -> (aR, aw).
    std::int64_t bad_shift = 0;
    std::int64_t bad_scale = 0;
    std::int64_t compared = 0;
    while (compared < points) {
        const std::int64_t t1 = int_horizon(rng);
        const std::int64_t t2 = int_horizon(rng);
        const double r1 = unit(rng);
        const double r2 = unit(rng);
        const double w = unit(rng) * 0.1;
        const double base = ecp(t1, r1, w) - ecp(t2, r2, w);
        if (std::fabs(base) < 1e-9) continue;
        ++compared;
        const double b = 1.0;
        const double a = 2.0;
        if (sign(ecp(t1, r1 + b, w) - ecp(t2, r2 + b, w)) != sign(base)) ++bad_shift;
        if (sign(ecp(t1, a * r1, a * w) - ecp(t2, a * r2, a * w)) != sign(base)) ++bad_scale;
    }
    report.checks.push_back({"location_shift_order", bad_shift == 0,
                             fmt("%.0f violations", static_cast<double>(bad_shift))});
    report.checks.push_back({"scale_shift_order", bad_scale == 0,
                             fmt("%.0f violations", static_cast<double>(bad_scale))});

    // (T=100, R=50) against (T=101, R=50.3) at w = 0.2.
    const double f1 = ecp_cumulative(100.0, 50.0, 0.2);
    const double f2 = ecp_cumulative(101.0, 50.3, 0.2);
    const double l1 = linear_objective(100.0, 50.0, 0.2);
    const double l2 = linear_objective(101.0, 50.3, 0.2);
    char buf[160];
    std::snprintf(buf, sizeof buf, "ecp %.5f vs %.5f, linear %.2f vs %.2f", f1, f2, l1, l2);
    report.checks.push_back({"dominated_design_counterexample", f1 > f2 && l2 > l1, buf});
    return report;
}

}  // namespace aed::objective
