#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "aed/calibration/ait.hpp"
#include "aed/objective/design.hpp"

namespace aed::app {

inline constexpr int kConfigVersion = 1;

/// Invalid run configuration; `field` is the dotted path of the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct WGrid {
    std::size_t points = 50;
    double lo = 1e-4;
    double hi = 1.0;
};

/// One experiment description as read from a JSON config file.
struct RunConfig {
    int version = kConfigVersion;
    std::uint64_t seed = 0;
    objective::DesignConfig design;
    WGrid w_grid;
    /// A single policy instead of the phi family (calibrate only).
    std::optional<sim::Policy> fixed_policy;
    /// Shared null mean for calibrate; defaults to the prior mean.
    std::optional<double> null_mean;

    std::vector<double> w_values() const;
    sim::Policy calibration_policy() const;
};

/// Parses and validates.  `seed_override` replaces (or supplies) the seed.
RunConfig parse_run_config(const nlohmann::json& j,
                           std::optional<std::uint64_t> seed_override = std::nullopt);
RunConfig load_run_config(const std::string& path,
                          std::optional<std::uint64_t> seed_override = std::nullopt);

/// Canonical form; parse_run_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& config);

/// AIT schedule for the config's calibration policy under the shared null.
calibration::CriticalSchedule calibrate(const RunConfig& config, const sim::Execution& exec = {});

}  // namespace aed::app
