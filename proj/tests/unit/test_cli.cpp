#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "aed/app/config.hpp"
#include "aed/objective/design.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

#ifndef AED_BIN
#error "AED_BIN must point at the aed executable"
#endif

namespace {

const fs::path kWork = fs::temp_directory_path() / "aed_cli_test";

int run(const std::string& args, const std::string& tag) {
    fs::create_directories(kWork);
    const std::string cmd = std::string(AED_BIN) + " " + args + " > " + (kWork / (tag + ".out")).string() +
                            " 2> " + (kWork / (tag + ".err")).string();
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_config(const std::string& name, const json& j) {
    fs::create_directories(kWork);
    const auto p = kWork / (name + ".json");
    std::ofstream(p) << j.dump(2);
    return p;
}

json quick() {
    return json::parse(R"({
      "version": 1, "seed": 7, "arms": 2,
      "prior": {"kind": "fixed", "means": [0.7, 0.3]},
      "test": {"kind": "two_sample_t", "sidedness": "two_sided"},
      "w": 0.01, "t_max": 300, "reps": 200,
      "policy": {"family": "eps_ts", "phis": [0, 0.5, 1.0]}
    })");
}

}  // namespace

TEST_CASE("design command") {
    const auto cfg = write_config("quick", quick());
    const auto out = kWork / "design_out";
    fs::remove_all(out);
    REQUIRE(run("design -c " + cfg.string() + " --out-dir " + out.string() + " -q", "design") == 0);
    CHECK(fs::exists(out / "design.csv"));
    CHECK(fs::exists(out / "ecp_curves.csv"));
    CHECK(fs::exists(out / "power_phi_0.50.csv"));

    const auto summary = json::parse(slurp(kWork / "design.out"));
    const auto rec = aed::objective::obj_opt(aed::app::parse_run_config(quick()).design);
    CHECK(summary.at("recommendation").at("phi").get<double>() == rec.phi);
    CHECK(summary.at("recommendation").at("horizon").get<std::int64_t>() == rec.horizon);

    SUBCASE("worker count does not change the files") {
        const auto other = kWork / "design_out3";
        fs::remove_all(other);
        REQUIRE(run("design -c " + cfg.string() + " --out-dir " + other.string() + " --jobs 3 -q",
                    "design3") == 0);
        for (const auto& f : fs::directory_iterator(out)) {
            CHECK(slurp(f.path()) == slurp(other / f.path().filename()));
        }
    }
    SUBCASE("json output") {
        const auto jout = kWork / "design_json";
        fs::remove_all(jout);
        REQUIRE(run("design -c " + cfg.string() + " --out-dir " + jout.string() + " --format json -q",
                    "designj") == 0);
        const auto j = json::parse(slurp(jout / "design.json"));
        CHECK(j.at("recommendation").at("phi").get<double>() == rec.phi);
    }
}

TEST_CASE("design exit codes") {
    auto bad = quick();
    bad["arms"] = 1;
    CHECK(run("design -c " + write_config("bad", bad).string() + " -q", "bad") == 2);
    CHECK(slurp(kWork / "bad.err").find("arms") != std::string::npos);

    auto noseed = quick();
    noseed.erase("seed");
    CHECK(run("design -c " + write_config("noseed", noseed).string() + " -q", "noseed") == 2);
    CHECK(run("design -c " + write_config("noseed", noseed).string() + " --seed 3 -q --out-dir " +
                  (kWork / "seeded").string(),
              "seeded") == 0);

    std::ofstream(kWork / "broken.json") << "{\"version\": 1,";
    CHECK(run("design -c " + (kWork / "broken.json").string() + " -q", "broken") == 2);

    auto hard = quick();
    hard["t_max"] = 10;
    hard["prior"]["means"] = {0.505, 0.495};
    CHECK(run("design -c " + write_config("hard", hard).string() + " -q --out-dir " +
                  (kWork / "hard").string(),
              "hard") == 3);

    CHECK(run("design -c /nonexistent.json -q", "missing") != 0);
    CHECK(run("reproduce table9 -q", "unknown") != 0);
    CHECK(run("frobnicate", "sub") != 0);
}

TEST_CASE("calibrate command") {
    auto j = quick();
    j["prior"]["means"] = {0.5, 0.5};
    j["test"]["sidedness"] = "one_sided";
    j["t_max"] = 200;
    j["reps"] = 4000;
    j["runner"] = "exact";
    j["policy"] = {{"kind", "ur"}};
    const auto out = kWork / "cal";
    fs::remove_all(out);
    REQUIRE(run("calibrate -c " + write_config("cal", j).string() + " --out-dir " + out.string() + " -q",
                "cal") == 0);
    std::ifstream in(out / "schedule.csv");
    std::string line, last;
    std::getline(in, line);
    CHECK(line.find("right_tail") != std::string::npos);
    while (std::getline(in, line)) {
        if (!line.empty()) last = line;
    }
    const double q = std::stod(last.substr(last.find(',') + 1));
    CHECK(last.rfind("200,", 0) == 0);
    CHECK(q == doctest::Approx(1.645).epsilon(0.05));

    j["test"]["sidedness"] = "two_sided";
    j["reps"] = 500;
    REQUIRE(run("calibrate -c " + write_config("cal2", j).string() + " --out-dir " +
                    (kWork / "cal2").string() + " -q",
                "cal2") == 0);
    CHECK(slurp(kWork / "cal2" / "schedule.csv").find("abs_two_sided") != std::string::npos);
}

TEST_CASE("reproduce writes tables and a summary") {
    const auto out = kWork / "repro";
    fs::remove_all(out);
    CHECK(run("reproduce appendixF --reps 500 --out-dir " + out.string() + " -q", "repro") <= 1);
    CHECK(fs::exists(out));
    const auto summary = slurp(kWork / "repro.out");
    CHECK((summary.find("PASS") != std::string::npos || summary.find("FAIL") != std::string::npos));
}
