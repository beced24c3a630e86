#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "cellcov/runconfig.hpp"

using namespace cellcov;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

// Runs the CLI with output captured through a temp file.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() / ("cellcov_test_" + std::to_string(counter++));
    const std::string cmd = std::string(CELLCOV_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + out.string() + ".err";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove(out);
    fs::remove(out.string() + ".err");
    return {WEXITSTATUS(status), ss.str()};
}

// Minimal structural JSON-Schema check: type, required, properties, items.
bool validates(const nlohmann::json& value, const nlohmann::json& schema) {
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        if (t == "object" && !value.is_object())
            return false;
        if (t == "array" && !value.is_array())
            return false;
        if (t == "string" && !value.is_string())
            return false;
        if (t == "number" && !value.is_number())
            return false;
        if (t == "integer" && !value.is_number_integer())
            return false;
        if (t == "boolean" && !value.is_boolean())
            return false;
    }
    if (schema.contains("required"))
        for (const auto& key : schema["required"])
            if (!value.contains(key.get<std::string>()))
                return false;
    if (schema.contains("properties") && value.is_object())
        for (const auto& [key, sub] : schema["properties"].items())
            if (value.contains(key) && !validates(value.at(key), sub))
                return false;
    if (schema.contains("items") && value.is_array())
        for (const auto& item : value)
            if (!validates(item, schema["items"]))
                return false;
    return true;
}

nlohmann::json load_schema(const std::string& name) {
    std::ifstream in(fs::path(CELLCOV_SCHEMA_DIR) / name);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        n += (c == '\n') ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("range parsing") {
    CHECK(parse_int_range("3") == std::vector<int>{3});
    CHECK(parse_int_range("1..5") == std::vector<int>({1, 2, 3, 4, 5}));
    CHECK_THROWS_AS(parse_int_range("5..1"), std::domain_error);
    CHECK_THROWS_AS(parse_int_range("x"), std::domain_error);

    const auto grid = parse_db_range("-10:0.5:20");
    CHECK(grid.size() == 61);
    CHECK(grid.front() == doctest::Approx(-10.0));
    CHECK(grid.back() == doctest::Approx(20.0));
    CHECK(parse_db_range("3.5") == std::vector<double>{3.5});
    CHECK_THROWS_AS(parse_db_range("1:0:5"), std::domain_error);
}

TEST_CASE("RunConfig round-trips through JSON") {
    RunConfig cfg;
    cfg.command = "simulate";
    cfg.alpha = 3.7;
    cfg.K = {2, 3};
    cfg.M = {1, 2, 4};
    cfg.kappa = "auto";
    cfg.theta = "-5:1:5";
    cfg.epsilon = 0.05;
    cfg.eta0 = 0.4;
    cfg.eta1 = 0.55;
    cfg.runs = 12345;
    cfg.seed = 99;
    cfg.format = "json";
    const RunConfig back = RunConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(back.K == cfg.K);
    CHECK(back.epsilon == cfg.epsilon);
    CHECK(back.theta_grid_linear().size() == 11);
    // dB -> linear applied exactly once
    CHECK(back.theta_grid_linear()[5] == doctest::Approx(1.0));
}

TEST_CASE("coverage grid cardinality: 5 K x 61 thetas") {
    const auto r = run_cli("coverage --alpha 4 --K 1..5 --M 1 --kappa 1 --theta -10:0.5:20");
    REQUIRE(r.exit_code == 0);
    // comment + header + 5*61 rows
    CHECK(count_lines(r.output) == 2 + 5 * 61);
    CHECK(r.output.find("K,M,kappa,theta_db,theta_linear,value\n") != std::string::npos);
}

TEST_CASE("asymptote emits the b_1 = 2/pi row") {
    const auto r = run_cli("asymptote --alpha 4 --regime hse --K 1..2 --M 1..2");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("M1,1,0.5,high_spectral_efficiency,0.6366197723675") != std::string::npos);
}

TEST_CASE("usage errors exit 1 with a one-line reason") {
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("coverage --alpha 1.5 --kappa 1 --theta 0").exit_code == 1);
    CHECK(run_cli("coverage --kappa 0.3 --theta 0").exit_code == 1);
    CHECK(run_cli("simulate --mode bogus --theta 0 --runs 10 --kappa 1").exit_code == 1);
    CHECK(run_cli("optimize --theta 0").exit_code == 1); // no fit source
}

TEST_CASE("validate is byte-identical across repeated runs") {
    const std::string args = "validate --runs 4000 --n-points 500 --seed 7";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.output == b.output);
    CHECK(count_lines(a.output) == 2 + 36 + 2 + 1); // header x2, grid, invariances, RESULT
    CHECK(a.output.find("RESULT:") != std::string::npos);
}

TEST_CASE("JSON outputs validate against the shipped schemas") {
    {
        const auto r = run_cli("coverage --K 1..2 --M 1 --kappa 1 --theta -5:5:5 --format json");
        REQUIRE(r.exit_code == 0);
        CHECK(validates(nlohmann::json::parse(r.output), load_schema("coverage_grid.schema.json")));
    }
    {
        const auto r = run_cli(
            "simulate --K 2 --M 2 --kappa 1.5 --theta 0 --runs 2000 --n-points 300 --format json");
        REQUIRE(r.exit_code == 0);
        CHECK(validates(nlohmann::json::parse(r.output), load_schema("sim_result.schema.json")));
    }
    {
        const auto r = run_cli("estimate-load --K 1..2 --lambda-u 10 --load-realizations 4 "
                               "--window 10 --seed 5 --format json");
        REQUIRE(r.exit_code == 0);
        CHECK(validates(nlohmann::json::parse(r.output), load_schema("load_estimate.schema.json")));
    }
    {
        const auto r = run_cli("optimize --theta -10:10:10 --eta0 0.5 --eta1 0.5 --bound 4 "
                               "--epsilon 0.5 --format json");
        REQUIRE(r.exit_code == 0);
        CHECK(
            validates(nlohmann::json::parse(r.output), load_schema("optimize_sweep.schema.json")));
    }
}

TEST_CASE("realization dumps validate against their schemas") {
    const fs::path dir = fs::temp_directory_path() / "cellcov_dumps";
    fs::remove_all(dir);
    {
        const auto r = run_cli("simulate --K 2 --M 2 --kappa 1 --theta 0 --runs 50 "
                               "--n-points 50 --dump-realizations 2 --dump-dir " +
                               dir.string() + " --seed 9");
        REQUIRE(r.exit_code == 0);
        std::ifstream in(dir / "plps_9_K2_M2_0.json");
        REQUIRE(in.good());
        CHECK(validates(nlohmann::json::parse(in), load_schema("plps_sample.schema.json")));
    }
    {
        const auto r = run_cli("estimate-load --K 1..2 --lambda-u 10 --load-realizations 3 "
                               "--window 8 --dump-realizations 1 --dump-dir " +
                               dir.string() + " --seed 9");
        REQUIRE(r.exit_code == 0);
        std::ifstream in(dir / "deployment_9_0.json");
        REQUIRE(in.good());
        CHECK(validates(nlohmann::json::parse(in), load_schema("deployment_sample.schema.json")));
    }
    fs::remove_all(dir);
}

TEST_CASE("kappa auto caches the load fit") {
    const fs::path dir = fs::temp_directory_path() / "cellcov_cache_test";
    fs::remove_all(dir);
    setenv("CELLCOV_CACHE_DIR", dir.c_str(), 1);
    const std::string args = "coverage --K 1..2 --M 1 --kappa auto --theta 0 "
                             "--load-realizations 3 --window 8 --seed 17";
    const auto first = run_cli(args);
    REQUIRE(first.exit_code == 0);
    REQUIRE(fs::exists(dir));
    bool found = false;
    for (const auto& entry : fs::directory_iterator(dir))
        found |= entry.path().extension() == ".json";
    CHECK(found);
    // second run hits the cache and reproduces the output
    const auto second = run_cli(args);
    CHECK(second.output == first.output);
    unsetenv("CELLCOV_CACHE_DIR");
    fs::remove_all(dir);
}
