#include "aed/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace aed::app {

using nlohmann::json;

namespace {

/// Field access with the dotted path carried along for error messages.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "config" : path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    const json& raw(const std::string& key) const {
        if (!has(key)) throw ConfigError(at(key), "is required");
        return j_.at(key);
    }

    Reader object(const std::string& key) const { return Reader(raw(key), at(key)); }

    double number(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::int64_t integer(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
        return v.get<std::int64_t>();
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) const {
        return has(key) ? integer(key) : fallback;
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string string(const std::string& key, const std::string& fallback) const {
        return has(key) ? string(key) : fallback;
    }

    std::vector<double> numbers(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError(at(key), "expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    /// Enum parse through one of the library's *_from_string functions.
    template <class F>
    auto choice(const std::string& key, F&& parse) const {
        const auto s = string(key);
        try {
            return parse(s);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(at(key), e.what());
        }
    }

    void reject_unknown() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw ConfigError(at(key), "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

power::PriorSpec parse_prior(const Reader& r, int arms) {
    const auto kind = r.string("kind");
    power::PriorSpec p;
    try {
        if (kind == "beta_iid") {
            p = power::PriorSpec::beta_iid(arms, r.number("a"), r.number("b"));
        } else if (kind == "beta_moments") {
            p = power::PriorSpec::beta_moments(arms, r.number("location"), r.number("scale"));
        } else if (kind == "gaussian_iid") {
            p = power::PriorSpec::gaussian_iid(arms, r.number("mean"), r.number("sd"),
                                               r.number("reward_scale"));
        } else if (kind == "fixed") {
            const auto means = r.numbers("means");
            require(static_cast<int>(means.size()) == arms, r.at("means"),
                    "needs one mean per arm");
            const auto reward = r.has("reward") ? r.choice("reward", sim::reward_kind_from_string)
                                                : sim::RewardKind::Bernoulli;
            p = reward == sim::RewardKind::Bernoulli
                    ? power::PriorSpec::fixed_bernoulli(means)
                    : power::PriorSpec::fixed_gaussian(means, r.number("reward_scale"));
        } else {
            throw ConfigError(r.at("kind"), "unknown prior kind '" + kind + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(r.at("kind"), e.what());
    }
    r.reject_unknown();
    return p;
}

stats::TestSpec parse_test(const Reader& r, int arms, double d0) {
    stats::TestSpec s;
    s.kind = r.choice("kind", stats::test_kind_from_string);
    require(s.kind != stats::TestKind::LRT, r.at("kind"), "lrt is not available in run configs");
    if (s.kind == stats::TestKind::TukeyBest) s.family = stats::FamilyMode::AllReject;
    if (r.has("sidedness")) s.sidedness = r.choice("sidedness", stats::sidedness_from_string);
    if (r.has("family")) s.family = r.choice("family", stats::family_mode_from_string);
    s.baseline = r.number("baseline", s.baseline);
    s.control_arm = static_cast<int>(r.integer("control_arm", s.control_arm));
    require(s.control_arm >= 0 && s.control_arm < arms, r.at("control_arm"), "out of range");
    if (r.has("arms")) {
        const auto& v = r.raw("arms");
        require(v.is_array() && v.size() == 2 && v[0].is_number_integer() &&
                    v[1].is_number_integer(),
                r.at("arms"), "expected two arm indices");
        s.arm_i = v[0].get<int>();
        s.arm_j = v[1].get<int>();
        require(s.arm_i >= 0 && s.arm_i < arms && s.arm_j >= 0 && s.arm_j < arms &&
                    s.arm_i != s.arm_j,
                r.at("arms"), "needs two distinct arms in range");
    }
    s.pooled_variance = r.boolean("pooled_variance", false);
    s.min_effect = d0;
    r.reject_unknown();
    return s;
}

json prior_json(const power::PriorSpec& p) {
    switch (p.kind) {
        case power::PriorKind::BetaIID: return {{"kind", "beta_iid"}, {"a", p.a}, {"b", p.b}};
        case power::PriorKind::GaussianIID:
            return {{"kind", "gaussian_iid"},
                    {"mean", p.mean},
                    {"sd", p.sd},
                    {"reward_scale", p.reward_scale}};
        case power::PriorKind::FixedVector: {
            json j = {{"kind", "fixed"},
                      {"means", p.means},
                      {"reward", std::string(sim::to_string(p.reward_kind))}};
            if (p.reward_kind == sim::RewardKind::Gaussian) j["reward_scale"] = p.reward_scale;
            return j;
        }
    }
    return {};
}

double prior_mean(const power::PriorSpec& p) {
    switch (p.kind) {
        case power::PriorKind::BetaIID: return p.a / (p.a + p.b);
        case power::PriorKind::GaussianIID: return p.mean;
        case power::PriorKind::FixedVector: {
            double s = 0.0;
            for (double m : p.means) s += m;
            return s / static_cast<double>(p.means.size());
        }
    }
    return 0.0;
}

}  // namespace

std::vector<double> RunConfig::w_values() const {
    return objective::default_w_grid(w_grid.points, w_grid.lo, w_grid.hi);
}

sim::Policy RunConfig::calibration_policy() const {
    if (fixed_policy) return *fixed_policy;
    return objective::family_policy(design.family, design.phis.front(), design.base.policy);
}

RunConfig parse_run_config(const json& j, std::optional<std::uint64_t> seed_override) {
    const Reader r(j, "");
    RunConfig c;
    c.version = static_cast<int>(r.integer("version"));
    require(c.version == kConfigVersion, "version",
            "unsupported version " + std::to_string(c.version));

    if (seed_override) {
        r.has("seed");
        c.seed = *seed_override;
    } else {
        require(r.has("seed"), "seed", "is required (no wall-clock seeding)");
        const auto& s = r.raw("seed");
        require(s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0),
                "seed", "expected a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }

    const auto arms = r.integer("arms");
    require(arms >= 2, "arms", "K must be >= 2");
    require(arms <= 64, "arms", "K must be <= 64");
    const int k = static_cast<int>(arms);

    auto& base = c.design.base;
    base.prior = parse_prior(r.object("prior"), k);

    const double d0 = r.number("d0", 0.0);
    require(d0 >= 0.0, "d0", "must be >= 0");
    base.spec = parse_test(r.object("test"), k, d0);

    base.alpha = r.number("alpha", 0.05);
    require(base.alpha > 0.0 && base.alpha < 1.0, "alpha", "must lie in (0, 1)");
    c.design.beta_target = r.number("beta", 0.2);
    require(c.design.beta_target > 0.0 && c.design.beta_target < 1.0, "beta",
            "must lie in (0, 1)");
    c.design.w = r.number("w", 0.01);
    require(c.design.w >= 0.0, "w", "must be >= 0");

    base.horizon = r.integer("t_max");
    require(base.horizon >= 2, "t_max", "must be >= 2");
    base.reps = r.integer("reps", 1000);
    require(base.reps >= 1, "reps", "must be >= 1");
    base.grid_points = static_cast<int>(r.integer("grid_points", 10));
    require(base.grid_points >= 2, "grid_points", "B must be >= 2");
    require(base.reps >= base.grid_points, "reps", "M must be >= B");
    base.calibration_reps = r.integer("calibration_reps", 0);
    require(base.calibration_reps == 0 || base.calibration_reps >= 100, "calibration_reps",
            "must be 0 (automatic) or >= 100");
    if (r.has("runner")) base.mode = r.choice("runner", sim::runner_mode_from_string);
    if (r.has("thresholds")) {
        base.thresholds = r.choice("thresholds", power::threshold_source_from_string);
        require(base.thresholds != power::ThresholdSource::FixedSchedule, "thresholds",
                "schedule thresholds are not available in run configs");
    }
    base.seed = c.seed;

    const Reader p = r.object("policy");
    auto& tpl = base.policy;
    tpl.reward_kind = base.prior.reward_kind;
    tpl.ucb_c = p.number("ucb_c", tpl.ucb_c);
    require(tpl.ucb_c > 0.0, p.at("ucb_c"), "must be > 0");
    tpl.random_ties = p.boolean("random_ties", false);
    if (p.has("beta_prior")) {
        const Reader bp = p.object("beta_prior");
        tpl.beta_prior = {bp.number("a"), bp.number("b")};
        require(tpl.beta_prior.a > 0.0 && tpl.beta_prior.b > 0.0, bp.at("a"), "must be > 0");
        bp.reject_unknown();
    }
    if (p.has("nig_prior")) {
        const Reader np = p.object("nig_prior");
        tpl.nig_prior = {np.number("mean"), np.number("kappa"), np.number("shape"),
                         np.number("rate")};
        require(tpl.nig_prior.kappa > 0.0 && tpl.nig_prior.shape > 0.0 &&
                    tpl.nig_prior.rate > 0.0,
                np.at("rate"), "kappa, shape and rate must be > 0");
        np.reject_unknown();
    }
    if (p.has("kind")) {
        sim::Policy fixed = tpl;
        fixed.kind = p.choice("kind", sim::policy_kind_from_string);
        fixed.epsilon = p.number("epsilon", 0.0);
        require(fixed.epsilon >= 0.0 && fixed.epsilon <= 1.0, p.at("epsilon"),
                "must lie in [0, 1]");
        c.fixed_policy = fixed;
    }
    c.design.family = p.has("family") ? p.choice("family", objective::policy_family_from_string)
                                      : objective::PolicyFamily::EpsTS;
    c.design.phis = p.has("phis") ? p.numbers("phis") : std::vector<double>{0.0};
    require(!c.design.phis.empty(), p.at("phis"), "must not be empty");
    for (double phi : c.design.phis) {
        require(phi >= 0.0 && phi <= 1.0, p.at("phis"), "every epsilon must lie in [0, 1]");
    }
    p.reject_unknown();

    if (r.has("w_grid")) {
        const Reader g = r.object("w_grid");
        const auto n = g.integer("points", 50);
        require(n >= 2, g.at("points"), "must be >= 2");
        c.w_grid.points = static_cast<std::size_t>(n);
        c.w_grid.lo = g.number("min", c.w_grid.lo);
        c.w_grid.hi = g.number("max", c.w_grid.hi);
        require(c.w_grid.lo > 0.0 && c.w_grid.hi > c.w_grid.lo, g.at("min"),
                "needs 0 < min < max");
        g.reject_unknown();
    }
    if (r.has("null_mean")) c.null_mean = r.number("null_mean");
    r.reject_unknown();

    try {
        c.design.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config", e.what());
    }
    return c;
}

RunConfig load_run_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    return parse_run_config(j, seed_override);
}

json to_json(const RunConfig& c) {
    const auto& base = c.design.base;
    const auto& spec = base.spec;
    json test = {{"kind", std::string(stats::to_string(spec.kind))},
                 {"sidedness", std::string(stats::to_string(spec.sidedness))},
                 {"family", std::string(stats::to_string(spec.family))},
                 {"baseline", spec.baseline},
                 {"control_arm", spec.control_arm},
                 {"arms", {spec.arm_i, spec.arm_j}},
                 {"pooled_variance", spec.pooled_variance}};
    const auto& tpl = base.policy;
    json policy = {{"family", std::string(objective::to_string(c.design.family))},
                   {"phis", c.design.phis},
                   {"ucb_c", tpl.ucb_c},
                   {"random_ties", tpl.random_ties},
                   {"beta_prior", {{"a", tpl.beta_prior.a}, {"b", tpl.beta_prior.b}}},
                   {"nig_prior",
                    {{"mean", tpl.nig_prior.mean},
                     {"kappa", tpl.nig_prior.kappa},
                     {"shape", tpl.nig_prior.shape},
                     {"rate", tpl.nig_prior.rate}}}};
    if (c.fixed_policy) {
        policy["kind"] = std::string(sim::to_string(c.fixed_policy->kind));
        policy["epsilon"] = c.fixed_policy->epsilon;
    }
    json j = {{"version", c.version},
              {"seed", c.seed},
              {"arms", base.prior.arms},
              {"prior", prior_json(base.prior)},
              {"test", test},
              {"d0", spec.min_effect},
              {"alpha", base.alpha},
              {"beta", c.design.beta_target},
              {"w", c.design.w},
              {"w_grid", {{"points", c.w_grid.points}, {"min", c.w_grid.lo}, {"max", c.w_grid.hi}}},
              {"t_max", base.horizon},
              {"reps", base.reps},
              {"grid_points", base.grid_points},
              {"calibration_reps", base.calibration_reps},
              {"runner", std::string(sim::to_string(base.mode))},
              {"thresholds", std::string(power::to_string(base.thresholds))},
              {"policy", policy}};
    if (c.null_mean) j["null_mean"] = *c.null_mean;
    return j;
}

calibration::CriticalSchedule calibrate(const RunConfig& config, const sim::Execution& exec) {
    const auto& base = config.design.base;
    const double mean = config.null_mean.value_or(prior_mean(base.prior));
    const bool bernoulli = base.prior.reward_kind == sim::RewardKind::Bernoulli;
    if (bernoulli && !(mean >= 0.0 && mean <= 1.0)) {
        throw ConfigError("null_mean", "must lie in [0, 1]");
    }
    const calibration::NullEstimate null{
        bernoulli ? sim::RewardKernel::bernoulli(mean)
                  : sim::RewardKernel::gaussian(mean, base.prior.reward_scale),
        mean};
    return calibration::ait_calibrate(base.prior.arms, base.horizon, null, base.spec,
                                      config.calibration_policy(), base.alpha, base.reps,
                                      config.seed, base.mode, exec);
}

}  // namespace aed::app
