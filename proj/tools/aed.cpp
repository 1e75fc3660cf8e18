// Command-line front end: reproduce the paper tables, run designs from a
// JSON config, or print an AIT critical schedule.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aed/app/config.hpp"
#include "aed/app/presets.hpp"
#include "aed/app/results.hpp"

namespace fs = std::filesystem;
using namespace aed;

namespace {

enum ExitCode { kOk = 0, kError = 1, kBadConfig = 2, kInfeasible = 3 };

/// Throttled "label: n%" lines on stderr.
class Progress {
public:
    Progress(bool quiet) : quiet_(quiet) {}

    void stage(const std::string& s) {
        if (quiet_) return;
        std::lock_guard lock(mutex_);
        finish_line();
        std::cerr << s << '\n';
    }

    sim::ProgressFn counter(std::string label, std::size_t total) {
        done_ = 0;
        label_ = std::move(label);
        total_ = total;
        if (quiet_ || total == 0) return {};
        return [this](std::size_t n) {
            const auto done = done_ += n;
            const auto now = std::chrono::steady_clock::now();
            std::lock_guard lock(mutex_);
            if (now - last_ < std::chrono::milliseconds(200) && done < total_) return;
            last_ = now;
            const double pct = 100.0 * static_cast<double>(std::min(done, total_)) /
                               static_cast<double>(total_);
            std::fprintf(stderr, "\r%s: %5.1f%%", label_.c_str(), pct);
            open_line_ = true;
        };
    }

    void done() {
        std::lock_guard lock(mutex_);
        finish_line();
    }

private:
    void finish_line() {
        if (open_line_) std::cerr << '\n';
        open_line_ = false;
    }

    bool quiet_;
    std::mutex mutex_;
    std::atomic<std::size_t> done_{0};
    std::size_t total_ = 0;
    std::string label_;
    std::chrono::steady_clock::time_point last_{};
    bool open_line_ = false;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

std::string phi_tag(double phi) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", phi);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive experiment design engine"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::uint64_t> seed;
    unsigned jobs = 0;
    std::string out_dir = "results";
    std::string format = "csv";
    std::optional<std::int64_t> reps;
    bool quiet = false;
    app.add_option("--seed", seed, "Master seed (overrides the config)");
    app.add_option("--jobs", jobs, "Worker threads; 0 = all cores")->check(CLI::NonNegativeNumber);
    app.add_option("--out-dir", out_dir, "Directory for CSV / JSON outputs")
        ->envname("AED_OUT_DIR");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--reps", reps, "Replace every replication count of a reproduce preset")
        ->check(CLI::PositiveNumber);
    app.add_flag("-q,--quiet", quiet, "No progress on stderr");

    std::string table;
    auto* reproduce = app.add_subcommand("reproduce", "Run a paper table preset");
    reproduce->add_option("id", table, "Table id")->required()->check(
        CLI::IsMember(app::preset_ids()));

    std::string design_path;
    auto* design = app.add_subcommand("design", "Optimize phi for a JSON run config");
    design->add_option("-c,--config", design_path, "Config file")->required();

    std::string calibrate_path;
    auto* calibrate = app.add_subcommand("calibrate", "AIT critical schedule for a config");
    calibrate->add_option("-c,--config", calibrate_path, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kBadConfig;
    }

    Progress progress(quiet);
    sim::Execution exec;
    exec.jobs = jobs;

    try {
        fs::create_directories(out_dir);
        if (*reproduce) {
            app::ReproduceOptions opt;
            opt.seed = seed;
            opt.reps = reps;
            opt.exec = exec;
            opt.stage = [&](const std::string& s) { progress.stage(s); };
            const auto res = app::reproduce(table, opt);
            progress.done();
            if (format == "csv") {
                for (const auto& t : res.tables) {
                    std::ostringstream os;
                    t.write(os);
                    write_file(fs::path(out_dir) / (t.name + ".csv"), os.str());
                }
            } else {
                write_file(fs::path(out_dir) / (res.id + ".json"), res.to_json().dump(2) + "\n");
            }
            app::write_summary(std::cout, res);
            return kOk;
        }

        if (*design) {
            const auto cfg = app::load_run_config(design_path, seed);
            exec.progress = progress.counter("design", app::design_work(cfg.design));
            const auto points = objective::evaluate_designs(cfg.design, exec);
            progress.done();
            objective::DesignRecommendation rec;
            try {
                rec = objective::recommend(points, cfg.design.w);
            } catch (const objective::InfeasibleDesign& e) {
                std::cerr << "infeasible: " << e.what() << '\n';
                for (const auto& p : points) {
                    std::cerr << "  phi " << phi_tag(p.phi) << ": power "
                              << p.curve.power(p.curve.horizon()) << " at T_max\n";
                }
                return kInfeasible;
            }
            const auto result = app::design_result_json(rec, cfg.w_values());
            nlohmann::json summary = {{"recommendation", result["recommendation"]},
                                      {"feasible_set", result["feasible_set"]},
                                      {"config", app::to_json(cfg)}};
            std::cout << summary.dump(2) << '\n';
            if (format == "csv") {
                std::ostringstream d;
                objective::write_csv(d, rec);
                write_file(fs::path(out_dir) / "design.csv", d.str());
                std::ostringstream c;
                objective::write_csv(c, objective::relative_ecp_curve(rec.points, cfg.w_values()));
                write_file(fs::path(out_dir) / "ecp_curves.csv", c.str());
                for (const auto& p : rec.points) {
                    std::ostringstream pc;
                    power::write_csv(pc, p.curve);
                    write_file(fs::path(out_dir) / ("power_phi_" + phi_tag(p.phi) + ".csv"),
                               pc.str());
                }
            } else {
                write_file(fs::path(out_dir) / "design.json", result.dump(2) + "\n");
            }
            return kOk;
        }

        if (*calibrate) {
            const auto cfg = app::load_run_config(calibrate_path, seed);
            exec.progress = progress.counter(
                "calibrate", static_cast<std::size_t>(cfg.design.base.reps));
            const auto schedule = app::calibrate(cfg, exec);
            progress.done();
            if (format == "csv") {
                std::ostringstream os;
                calibration::write_csv(os, schedule);
                write_file(fs::path(out_dir) / "schedule.csv", os.str());
                std::cout << os.str();
            } else {
                nlohmann::json j = {
                    {"sided", schedule.sided == calibration::Sided::AbsTwoSided ? "abs_two_sided"
                                                                                : "right_tail"},
                    {"alpha", schedule.alpha},
                    {"reps", schedule.reps_used},
                    {"thresholds", schedule.thresholds}};
                write_file(fs::path(out_dir) / "schedule.json", j.dump(2) + "\n");
                std::cout << j.dump(2) << '\n';
            }
            return kOk;
        }
    } catch (const app::ConfigError& e) {
        progress.done();
        std::cerr << "config error: " << e.what() << '\n';
        return kBadConfig;
    } catch (const std::exception& e) {
        progress.done();
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kOk;
}
