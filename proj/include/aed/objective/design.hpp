#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aed/power/power_analysis.hpp"

namespace aed::objective {

/// Parametric policy family searched by the optimizer; phi is epsilon.
enum class PolicyFamily { EpsTS, EpsGreedy };

std::string_view to_string(PolicyFamily f);
PolicyFamily policy_family_from_string(std::string_view name);

/// `base` supplies everything but the kind and epsilon (priors, tie rule).
sim::Policy family_policy(PolicyFamily family, double phi, const sim::Policy& base);

struct DesignPoint {
    double phi = 0.0;
    bool feasible = false;
    std::int64_t horizon = 0;  // T_phi, or T_max when infeasible
    double mean_reward = 0.0;  // r-bar at `horizon`
    double ecp = 0.0;          // at the configured w
    power::PowerCurve curve;
};

struct DesignRecommendation {
    double phi = 0.0;
    std::int64_t horizon = 0;
    double mean_reward = 0.0;
    double ecp = 0.0;
    double w = 0.0;
    std::vector<DesignPoint> points;  // every phi, feasible or not

    std::vector<const DesignPoint*> feasible_set() const;
};

struct InfeasibleDesign : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DesignConfig {
    power::PowerConfig base;  // base.horizon is T_max; base.policy is the template
    PolicyFamily family = PolicyFamily::EpsTS;
    std::vector<double> phis;
    double beta_target = 0.2;
    double w = 0.01;

    void validate() const;
};

/// Power analysis for every phi (common random numbers across phi).  Points
/// that never reach beta_target within T_max are marked infeasible and scored
/// at T_max.
std::vector<DesignPoint> evaluate_designs(const DesignConfig& config,
                                          const sim::Execution& exec = {});

/// argmax of ecp over feasible points at weight w; ties go to the smaller phi.
/// Throws InfeasibleDesign when no point is feasible.
DesignRecommendation recommend(std::vector<DesignPoint> points, double w);

/// evaluate_designs followed by recommend.
DesignRecommendation obj_opt(const DesignConfig& config, const sim::Execution& exec = {});

/// 50 log-spaced points on [1e-4, 1] unless overridden.
std::vector<double> default_w_grid(std::size_t n = 50, double lo = 1e-4, double hi = 1.0);

struct RelativeEcpCurves {
    std::vector<double> w;
    std::vector<double> phis;
    std::vector<std::vector<double>> relative;  // [phi][w], <= 0
    std::vector<double> best_phi;               // per w
};

RelativeEcpCurves relative_ecp_curve(const std::vector<DesignPoint>& points,
                                     const std::vector<double>& w_grid);

struct EcpAtW {
    double w = 0.0;
    std::vector<double> phis;
    std::vector<double> ecp;
    std::vector<double> relative;
    double best_phi = 0.0;
};

/// Scores stored feasible points at a new w with no re-simulation.
EcpAtW ecp_at(const std::vector<DesignPoint>& points, double w);

struct SensitivityRow {
    std::string label;
    power::PriorSpec true_prior;
    double chosen_phi = 0.0;
    double true_best_phi = 0.0;
    double misopt_loss = 0.0;
    double random_loss = 0.0;
};

/// Optimizes phi under config.base.prior, then scores every phi under each
/// true prior: loss = best ecp under the truth minus the ecp of the chosen
/// phi; the random baseline averages that loss over all phi.
std::vector<SensitivityRow> sensitivity_sweep(
    const DesignConfig& config, const std::vector<std::pair<std::string, power::PriorSpec>>& truths,
    const sim::Execution& exec = {});

struct PostEval {
    double mean_reward = 0.0;
    double ecp = 0.0;
};

/// Re-simulates a chosen design at a fixed horizon under realized arm means.
PostEval post_experiment_eval(const sim::Policy& policy, std::int64_t horizon,
                              const power::PriorSpec& realized, double w, std::int64_t reps,
                              std::uint64_t seed, sim::RunnerMode mode = sim::RunnerMode::Batched,
                              const sim::Execution& exec = {});

void write_csv(std::ostream& os, const DesignRecommendation& rec);
void write_csv(std::ostream& os, const RelativeEcpCurves& curves);

}  // namespace aed::objective
