#pragma once

#include <vector>

#include <json.hpp>

#include "aed/objective/design.hpp"

namespace aed::app {

/// Recommendation, every evaluated point, relative-ECP curves over `w_grid`
/// and thinned beta / reward curves per phi.
nlohmann::json design_result_json(const objective::DesignRecommendation& rec,
                                  const std::vector<double>& w_grid);

/// Points stored by design_result_json, without their power curves.
std::vector<objective::DesignPoint> points_from_json(const nlohmann::json& result);

/// Per-phi ecp and relative ecp at w, plus the best phi.
nlohmann::json ecp_json(const std::vector<objective::DesignPoint>& points, double w);

/// Progress units reported by evaluate_designs for this config.
std::size_t design_work(const objective::DesignConfig& config);

/// At most `max_points` (t, beta, mean_reward) samples, always keeping t = T.
nlohmann::json thinned_curve_json(const power::PowerCurve& curve, std::size_t max_points = 400);

}  // namespace aed::app
