#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fluxbvp/cli.hpp"
#include "fluxbvp/io.hpp"

using namespace fluxbvp;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() {
        std::remove(path.c_str());
        std::remove((path + ".json").c_str());
    }
};

}  // namespace

TEST_CASE("config precedence: flag > env > file > preset for every key") {
    for (const std::string& key : cli::config_keys()) {
        const std::map<std::string, std::string> preset{{key, "preset"}};
        const std::map<std::string, std::string> file{{key, "file"}};
        const std::map<std::string, std::string> env{{key, "env"}};
        const std::map<std::string, std::string> flag{{key, "flag"}};

        CHECK(cli::resolve_config(preset, {}, {}, {}).at(key) == "preset");
        CHECK(cli::resolve_config(preset, file, {}, {}).at(key) == "file");
        CHECK(cli::resolve_config(preset, file, env, {}).at(key) == "env");
        CHECK(cli::resolve_config(preset, file, env, flag).at(key) == "flag");
        CHECK(cli::resolve_config({}, {}, {}, {}).count(key) == 0);
    }
}

TEST_CASE("built-in defaults apply when a key is absent") {
    const SolverControls ctl = cli::controls_from_config({});
    CHECK(ctl.abs_tol == 1e-10);
    CHECK(ctl.rel_tol == 1e-10);
    CHECK(ctl.t_max == 200.0);
    CHECK(ctl.bisect_tol == 1e-10);
    CHECK(ctl.blowup_threshold == 1e8);
}

TEST_CASE("unknown keys are rejected naming the key") {
    CHECK_THROWS_WITH_AS(
        (void)cli::resolve_config({}, {{"bogus", "1"}}, {}, {}),
        doctest::Contains("bogus"), std::invalid_argument);
}

TEST_CASE("environment overrides are read from the process environment") {
    CHECK(cli::env_name_for_key("abs_tol") == "FLUXBVP_ABS_TOL");
    setenv("FLUXBVP_B", "2.5", 1);
    const auto env = cli::env_layer_from_process();
    unsetenv("FLUXBVP_B");
    CHECK(env.at("b") == "2.5");
}

TEST_CASE("missing required keys exit 2 naming the field") {
    const RunResult res =
        run_cli({"solve", "--beta", "0.5", "--a", "0", "--b", "1"});
    CHECK(res.code == cli::kExitBadConfig);
    CHECK(res.err.find(": c") != std::string::npos);
}

TEST_CASE("solve with the oracle preset reproduces the closed form") {
    TempFile csv("test_cli_oracle.csv");
    const RunResult res =
        run_cli({"solve", "--preset", "oracle", "--out", csv.path});
    REQUIRE(res.code == 0);

    const auto rows = io::parse_csv(slurp(csv.path));
    REQUIRE(rows.size() == 97);
    bool found = false;
    for (const ShootState& s : rows) {
        if (std::abs(s.t - 0.75) < 1e-12) {
            found = true;
            CHECK(s.f == doctest::Approx(0.5).epsilon(1e-7));
            CHECK(s.fp == doctest::Approx(-1.0).epsilon(1e-7));
            CHECK(s.fpp == doctest::Approx(-2.0).epsilon(1e-6));
        }
    }
    CHECK(found);
}

TEST_CASE("solve output is deterministic") {
    TempFile a("test_cli_det_a.csv"), b("test_cli_det_b.csv");
    REQUIRE(run_cli({"solve", "--preset", "oracle", "--out", a.path}).code == 0);
    REQUIRE(run_cli({"solve", "--preset", "oracle", "--out", b.path}).code == 0);
    CHECK(slurp(a.path) == slurp(b.path));
}

TEST_CASE("solve classifies b = 0 as Type II") {
    TempFile csv("test_cli_b0.csv");
    const RunResult res =
        run_cli({"solve", "--preset", "default-shoot", "--out", csv.path});
    CHECK(res.code == 0);
    CHECK(res.out.find("type=II") != std::string::npos);
}

TEST_CASE("shoot exits 4 when the Type I set is empty") {
    const RunResult res = run_cli({"shoot", "--preset", "paper-b1-empty"});
    CHECK(res.code == cli::kExitBracketFailure);
    CHECK(res.err.find("beta = 1 with a <= 0") != std::string::npos);
}

TEST_CASE("shoot regression value for the default preset") {
    // Frozen from the fixed-step grid-scan + bisection reference in this
    // repository (beta = 0.5, a = 0, c = -1).
    constexpr double kBStarReference = 1.9389194140;
    TempFile rep("test_cli_shoot_reg.txt");
    const RunResult res =
        run_cli({"shoot", "--preset", "default-shoot", "--out", rep.path});
    REQUIRE(res.code == 0);
    const std::string text = slurp(rep.path);
    const auto pos = text.find("b_star=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::abs(std::stod(text.substr(pos + 7)) - kBStarReference) <= 1e-6);
}

TEST_CASE("solve exits 3 on step underflow") {
    // Tolerances no double-precision step can satisfy force the controller
    // below the feasible floor.
    TempFile csv("test_cli_underflow.csv");
    const RunResult res =
        run_cli({"solve", "--preset", "default-shoot", "--b", "1", "--abs-tol",
                 "1e-30", "--rel-tol", "1e-30", "--out", csv.path});
    CHECK(res.code == cli::kExitStepUnderflow);
    CHECK(res.out.find("step_underflow=true") != std::string::npos);
}

TEST_CASE("shoot exits 5 when the predicate misbehaves under override") {
    // g(x) = -x^4 drives f' upward explosively: probes end in step underflow
    // and the bisection predicate never produces a usable verdict.
    const RunResult res =
        run_cli({"shoot", "--g", "poly", "--coeffs", "0,0,0,0,-1", "--a", "0",
                 "--c", "-1", "--override", "true"});
    CHECK(res.code == cli::kExitInconsistent);
}

TEST_CASE("unknown preset exits 2") {
    const RunResult res = run_cli({"solve", "--preset", "nope"});
    CHECK(res.code == cli::kExitBadConfig);
    CHECK(res.err.find("nope") != std::string::npos);
}

TEST_CASE("shoot reports b_star below -c/a for a > 0") {
    TempFile rep("test_cli_shoot_a1.txt");
    const RunResult res = run_cli(
        {"shoot", "--beta", "0.5", "--a", "1", "--c", "-1", "--out", rep.path});
    REQUIRE(res.code == 0);
    const std::string text = slurp(rep.path);
    const auto pos = text.find("b_star=");
    REQUIRE(pos != std::string::npos);
    const double b_star = std::stod(text.substr(pos + 7));
    CHECK(b_star > 0.0);
    CHECK(b_star < 1.0);
    // The JSON sibling mirrors the text report.
    CHECK(slurp(rep.path + ".json").find("b_star") != std::string::npos);
}

TEST_CASE("sweep grids") {
    SUBCASE("single point at b = 0") {
        TempFile csv("test_cli_sweep1.csv");
        const RunResult res =
            run_cli({"sweep", "--preset", "default-shoot", "--b-lo", "0",
                     "--b-hi", "0", "--n", "1", "--out", csv.path});
        REQUIRE(res.code == 0);
        const std::string text = slurp(csv.path);
        CHECK(text.find(",II,") != std::string::npos);
        CHECK(std::count(text.begin(), text.end(), '\n') == 2);  // header + row
    }

    SUBCASE("empty grid exits 2") {
        const RunResult res =
            run_cli({"sweep", "--preset", "default-shoot", "--b-lo", "0",
                     "--b-hi", "1", "--n", "0"});
        CHECK(res.code == cli::kExitBadConfig);
    }

    SUBCASE("64 points straddling the flip stay monotone") {
        TempFile csv("test_cli_sweep64.csv");
        const RunResult res =
            run_cli({"sweep", "--preset", "default-shoot", "--b-lo", "-1",
                     "--b-hi", "3", "--n", "64", "--out", csv.path});
        REQUIRE(res.code == 0);
        CHECK(res.out.find("monotone=true") != std::string::npos);

        std::istringstream in(slurp(csv.path));
        std::string line;
        std::getline(in, line);  // header
        bool seen_type_one = false;
        int rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            const bool is_one = line.find(",I,") != std::string::npos;
            const bool is_two = line.find(",II,") != std::string::npos;
            CHECK((is_one || is_two));
            if (is_one) seen_type_one = true;
            if (seen_type_one) CHECK(!is_two);
        }
        CHECK(rows == 64);
        CHECK(seen_type_one);
    }
}

TEST_CASE("transform maps m to beta and reports the residual") {
    TempFile rep("test_cli_transform.txt");
    const RunResult res =
        run_cli({"transform", "--m", "-0.75", "--a", "0", "--out", rep.path});
    REQUIRE(res.code == 0);
    CHECK(res.out.find("beta=0.4\n") != std::string::npos);
    const std::string text = slurp(rep.path);
    const auto pos = text.find("m_equation_residual=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(text.substr(pos + 20)) <= 1e-7);
}

TEST_CASE("transform rejects m outside (-1, -1/2)") {
    CHECK(run_cli({"transform", "--m", "-0.5", "--a", "0"}).code ==
          cli::kExitBadConfig);
    CHECK(run_cli({"transform", "--m", "-1", "--a", "0"}).code ==
          cli::kExitBadConfig);
}

TEST_CASE("verify --list prints the criteria without running") {
    const RunResult res = run_cli({"verify", "--list"});
    CHECK(res.code == 0);
    CHECK(std::count(res.out.begin(), res.out.end(), '\n') == 12);
    CHECK(res.out.find("exact-solution oracle") != std::string::npos);
}

TEST_CASE("verify detects a planted tolerance corruption") {
    SUBCASE("clean run of the oracle criterion passes") {
        const RunResult res = run_cli({"verify", "--only", "1"});
        CHECK(res.code == 0);
        CHECK(res.out.find("[PASS] 1") != std::string::npos);
    }

    SUBCASE("abs_tol corrupted via the environment fails it") {
        setenv("FLUXBVP_ABS_TOL", "1e-2", 1);
        const RunResult res = run_cli({"verify", "--only", "1"});
        unsetenv("FLUXBVP_ABS_TOL");
        CHECK(res.code == cli::kExitVerifyFailed);
        CHECK(res.out.find("[FAIL] 1") != std::string::npos);
    }
}

TEST_CASE("config file layer sits between preset and environment") {
    const std::string cfg_path = "test_cli_layer.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "b=1\n";
    }
    TempFile cleanup(cfg_path);

    TempFile csv("test_cli_layer.csv");
    // Flag wins over file: b = 10 is Type I, b = 1 would stop at a crossing.
    const RunResult res =
        run_cli({"solve", "--preset", "default-shoot", "--config", cfg_path,
                 "--b", "10", "--out", csv.path});
    REQUIRE(res.code == 0);
    CHECK(res.out.find("type=I ") != std::string::npos);
}
