#include "aed/app/results.hpp"

namespace aed::app {

using nlohmann::json;

namespace {

json point_json(const objective::DesignPoint& p) {
    return {{"phi", p.phi},
            {"feasible", p.feasible},
            {"horizon", p.horizon},
            {"mean_reward", p.mean_reward},
            {"ecp", p.ecp}};
}

}  // namespace

std::size_t design_work(const objective::DesignConfig& config) {
    return config.phis.size() * power::power_analysis_work(config.base);
}

json thinned_curve_json(const power::PowerCurve& curve, std::size_t max_points) {
    const std::size_t n = curve.beta.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + max_points - 1) / max_points);
    json t = json::array();
    json beta = json::array();
    json reward = json::array();
    for (std::size_t i = stride - 1; i < n; i += stride) {
        t.push_back(i + 1);
        beta.push_back(curve.beta[i]);
        reward.push_back(curve.mean_reward[i]);
    }
    if (n > 0 && t.back().get<std::size_t>() != n) {
        t.push_back(n);
        beta.push_back(curve.beta[n - 1]);
        reward.push_back(curve.mean_reward[n - 1]);
    }
    return {{"t", t}, {"beta", beta}, {"mean_reward", reward}};
}

json design_result_json(const objective::DesignRecommendation& rec,
                        const std::vector<double>& w_grid) {
    json points = json::array();
    json feasible = json::array();
    json power_curves = json::array();
    for (const auto& p : rec.points) {
        points.push_back(point_json(p));
        if (p.feasible) feasible.push_back(point_json(p));
        json c = thinned_curve_json(p.curve);
        c["phi"] = p.phi;
        power_curves.push_back(std::move(c));
    }
    const auto curves = objective::relative_ecp_curve(rec.points, w_grid);
    return {{"recommendation",
             {{"phi", rec.phi},
              {"horizon", rec.horizon},
              {"mean_reward", rec.mean_reward},
              {"ecp", rec.ecp},
              {"w", rec.w}}},
            {"points", points},
            {"feasible_set", feasible},
            {"curves",
             {{"w", curves.w},
              {"phis", curves.phis},
              {"relative", curves.relative},
              {"best_phi", curves.best_phi}}},
            {"power_curves", power_curves}};
}

std::vector<objective::DesignPoint> points_from_json(const json& result) {
    std::vector<objective::DesignPoint> out;
    for (const auto& j : result.at("points")) {
        objective::DesignPoint p;
        p.phi = j.at("phi").get<double>();
        p.feasible = j.at("feasible").get<bool>();
        p.horizon = j.at("horizon").get<std::int64_t>();
        p.mean_reward = j.at("mean_reward").get<double>();
        p.ecp = j.at("ecp").get<double>();
        out.push_back(std::move(p));
    }
    return out;
}

json ecp_json(const std::vector<objective::DesignPoint>& points, double w) {
    const auto at = objective::ecp_at(points, w);
    json rows = json::array();
    for (std::size_t i = 0; i < at.phis.size(); ++i) {
        rows.push_back({{"phi", at.phis[i]}, {"ecp", at.ecp[i]}, {"relative", at.relative[i]}});
    }
    return {{"w", w}, {"best_phi", at.best_phi}, {"designs", rows}};
}

}  // namespace aed::app
