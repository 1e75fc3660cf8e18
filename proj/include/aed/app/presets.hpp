#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aed/app/config.hpp"
#include "aed/sim/parallel.hpp"

namespace aed::app {

/// One tolerance check: passes when lo <= value <= hi.
struct Check {
    std::string name;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::optional<double> paper;

    bool info() const { return lo == -hi && std::isinf(hi); }
    bool passed() const { return info() || (value >= lo && value <= hi); }
};

/// A result table written as CSV: fixed formatting, '.' decimals.
struct CsvTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os) const;
};

struct ReproduceOptions {
    std::optional<std::uint64_t> seed;  // default 1
    std::optional<std::int64_t> reps;   // replaces every preset replication count
    sim::Execution exec;
    std::function<void(const std::string&)> stage;  // progress messages
};

struct ReproduceResult {
    std::string id;
    std::vector<CsvTable> tables;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool passed() const;
    nlohmann::json to_json() const;
};

/// table1..table5, appendixB, appendixF, plus horizons (the minimal-horizon
/// claims for a 0.2 gap).
const std::vector<std::string>& preset_ids();

/// Throws std::invalid_argument for an unknown id.
ReproduceResult reproduce(std::string_view id, const ReproduceOptions& options = {});

/// Six-arm Gaussian design study with realized arm means for post evaluation.
RunConfig empirical_preset();
std::vector<double> empirical_realized_means();

/// Three-arm Beta(5,5) study under the given test kind ("anova", "t_constant",
/// "t_control", "tukey").
RunConfig beta_preset(std::string_view test = "tukey");

/// Human-readable summary: checks with paper values and PASS/FAIL.
void write_summary(std::ostream& os, const ReproduceResult& result);

}  // namespace aed::app
