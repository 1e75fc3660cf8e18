#include "aed/objective/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "aed/objective/ecp.hpp"
#include "aed/sim/rng.hpp"

namespace aed::objective {

std::string_view to_string(PolicyFamily f) {
    return f == PolicyFamily::EpsTS ? "eps_ts" : "eps_greedy";
}

PolicyFamily policy_family_from_string(std::string_view name) {
    if (name == "eps_ts") return PolicyFamily::EpsTS;
    if (name == "eps_greedy") return PolicyFamily::EpsGreedy;
    throw std::invalid_argument("unknown policy family '" + std::string(name) + "'");
}

sim::Policy family_policy(PolicyFamily family, double phi, const sim::Policy& base) {
    if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
    sim::Policy p = base;
    p.kind = family == PolicyFamily::EpsGreedy ? sim::PolicyKind::EpsGreedy : sim::PolicyKind::EpsTS;
    p.epsilon = phi;
    return p;
}

std::vector<const DesignPoint*> DesignRecommendation::feasible_set() const {
    std::vector<const DesignPoint*> out;
    for (const auto& p : points) {
        if (p.feasible) out.push_back(&p);
    }
    return out;
}

void DesignConfig::validate() const {
    base.validate();
    if (phis.empty()) throw std::invalid_argument("phi list is empty");
    if (!(beta_target > 0.0 && beta_target < 1.0)) {
        throw std::invalid_argument("beta must lie in (0, 1)");
    }
    if (!(w >= 0.0)) throw std::invalid_argument("w must be >= 0");
    for (double phi : phis) family_policy(family, phi, base.policy);
}

std::vector<DesignPoint> evaluate_designs(const DesignConfig& config, const sim::Execution& exec) {
    config.validate();
    std::vector<DesignPoint> points;
    points.reserve(config.phis.size());
    for (double phi : config.phis) {
        power::PowerConfig pc = config.base;
        pc.policy = family_policy(config.family, phi, config.base.policy);
        DesignPoint p;
        p.phi = phi;
        p.curve = power::power_analysis(pc, exec);
        const auto t = p.curve.min_horizon(config.beta_target);
        p.feasible = t.has_value();
        p.horizon = t.value_or(pc.horizon);
        p.mean_reward = p.curve.mean_reward[static_cast<std::size_t>(p.horizon - 1)];
        p.ecp = ecp(p.horizon, p.mean_reward, config.w);
        points.push_back(std::move(p));
    }
    return points;
}

namespace {

/// Index of the best feasible point at w, ties toward smaller phi; -1 if none.
int best_index(const std::vector<DesignPoint>& points, double w) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!p.feasible) continue;
        const double s = ecp(p.horizon, p.mean_reward, w);
        if (best < 0 || s > best_score || (s == best_score && p.phi < points[best].phi)) {
            best = static_cast<int>(i);
            best_score = s;
        }
    }
    return best;
}

}  // namespace

DesignRecommendation recommend(std::vector<DesignPoint> points, double w) {
    for (auto& p : points) p.ecp = ecp(p.horizon, p.mean_reward, w);
    const int best = best_index(points, w);
    if (best < 0) throw InfeasibleDesign("no design meets power constraint within T_max");
    DesignRecommendation rec;
    rec.phi = points[best].phi;
    rec.horizon = points[best].horizon;
    rec.mean_reward = points[best].mean_reward;
    rec.ecp = points[best].ecp;
    rec.w = w;
    rec.points = std::move(points);
    return rec;
}

DesignRecommendation obj_opt(const DesignConfig& config, const sim::Execution& exec) {
    return recommend(evaluate_designs(config, exec), config.w);
}

std::vector<double> default_w_grid(std::size_t n, double lo, double hi) {
    if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("invalid w grid");
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

EcpAtW ecp_at(const std::vector<DesignPoint>& points, double w) {
    const int best = best_index(points, w);
    if (best < 0) throw InfeasibleDesign("no design meets power constraint within T_max");
    EcpAtW out;
    out.w = w;
    out.best_phi = points[best].phi;
    const double top = ecp(points[best].horizon, points[best].mean_reward, w);
    for (const auto& p : points) {
        if (!p.feasible) continue;
        const double s = ecp(p.horizon, p.mean_reward, w);
        out.phis.push_back(p.phi);
        out.ecp.push_back(s);
        out.relative.push_back(s - top);
    }
    return out;
}

RelativeEcpCurves relative_ecp_curve(const std::vector<DesignPoint>& points,
                                     const std::vector<double>& w_grid) {
    if (std::none_of(points.begin(), points.end(), [](const auto& p) { return p.feasible; })) {
        throw InfeasibleDesign("no design meets power constraint within T_max");
    }
    RelativeEcpCurves out;
    out.w = w_grid;
    for (const auto& p : points) {
        if (p.feasible) out.phis.push_back(p.phi);
    }
    out.relative.assign(out.phis.size(), std::vector<double>(w_grid.size()));
    for (std::size_t j = 0; j < w_grid.size(); ++j) {
        const auto at = ecp_at(points, w_grid[j]);
        out.best_phi.push_back(at.best_phi);
        for (std::size_t i = 0; i < at.relative.size(); ++i) out.relative[i][j] = at.relative[i];
    }
    return out;
}

std::vector<SensitivityRow> sensitivity_sweep(
    const DesignConfig& config,
    const std::vector<std::pair<std::string, power::PriorSpec>>& truths,
    const sim::Execution& exec) {
    if (truths.empty()) throw std::invalid_argument("true prior grid is empty");
    const auto chosen = obj_opt(config, exec);
    std::vector<SensitivityRow> rows;
    for (const auto& [label, prior] : truths) {
        DesignConfig truth = config;
        truth.base.prior = prior;
        const auto points = evaluate_designs(truth, exec);
        const int best = best_index(points, config.w);
        const double top =
            best >= 0 ? points[best].ecp
                      : std::max_element(points.begin(), points.end(), [](auto& a, auto& b) {
                            return a.ecp < b.ecp;
                        })->ecp;
        SensitivityRow row;
        row.label = label;
        row.true_prior = prior;
        row.chosen_phi = chosen.phi;
        row.true_best_phi = best >= 0 ? points[best].phi : std::numeric_limits<double>::quiet_NaN();
        double loss_sum = 0.0;
        for (const auto& p : points) {
            const double loss = top - p.ecp;
            loss_sum += loss;
            if (p.phi == chosen.phi) row.misopt_loss = loss;
        }
        row.random_loss = loss_sum / static_cast<double>(points.size());
        rows.push_back(row);
    }
    return rows;
}

PostEval post_experiment_eval(const sim::Policy& policy, std::int64_t horizon,
                              const power::PriorSpec& realized, double w, std::int64_t reps,
                              std::uint64_t seed, sim::RunnerMode mode,
                              const sim::Execution& exec) {
    if (reps < 1 || horizon < 1) throw std::invalid_argument("reps and horizon must be >= 1");
    realized.validate();
    std::vector<double> per_rep(static_cast<std::size_t>(reps));
    sim::parallel_for(static_cast<std::size_t>(reps), exec, [&](std::size_t r) {
        sim::Rng prior_rng = sim::derive_stream(seed, r, sim::StageTag::kPrior);
        const auto arms = realized.draw(prior_rng);
        sim::Rng rng = sim::derive_stream(seed, r, sim::StageTag::kExperiment);
        const auto h = sim::run(mode, arms, horizon, policy, rng);
        per_rep[r] = h.cumulative_reward(horizon) / static_cast<double>(horizon);
    });
    PostEval out;
    out.mean_reward = std::accumulate(per_rep.begin(), per_rep.end(), 0.0) /
                      static_cast<double>(reps);
    out.ecp = ecp(horizon, out.mean_reward, w);
    return out;
}

void write_csv(std::ostream& os, const DesignRecommendation& rec) {
    os << "phi,feasible,horizon,mean_reward,ecp,recommended\n";
    char buf[160];
    for (const auto& p : rec.points) {
        std::snprintf(buf, sizeof buf, "%.4g,%d,%lld,%.6f,%.6f,%d\n", p.phi, p.feasible ? 1 : 0,
                      static_cast<long long>(p.horizon), p.mean_reward, p.ecp,
                      p.feasible && p.phi == rec.phi ? 1 : 0);
        os << buf;
    }
}

void write_csv(std::ostream& os, const RelativeEcpCurves& curves) {
    os << "w";
    char buf[64];
    for (double phi : curves.phis) {
        std::snprintf(buf, sizeof buf, ",phi_%.4g", phi);
        os << buf;
    }
    os << ",best_phi\n";
    for (std::size_t j = 0; j < curves.w.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.6g", curves.w[j]);
        os << buf;
        for (std::size_t i = 0; i < curves.phis.size(); ++i) {
            std::snprintf(buf, sizeof buf, ",%.6f", curves.relative[i][j]);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, ",%.4g\n", curves.best_phi[j]);
        os << buf;
    }
}

}  // namespace aed::objective
