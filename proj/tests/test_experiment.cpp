// Config parsing with line-anchored errors, CSV serialization, and the
// experiment runner end to end.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "orbitkit/csv.hpp"
#include "orbitkit/experiment.hpp"

using namespace orbitkit;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string error_of(const std::string& cfg_text) {
    try {
        parse_config(cfg_text);
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return "";
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("orbitkit_test_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("numbers and fields serialize deterministically") {
    REQUIRE(csv_number(0.5) == "0.5");
    REQUIRE(csv_number(1.0 / 3.0) == "0.33333333333333331");
    REQUIRE(csv_number(-0.0) == "-0");
    REQUIRE(csv_number(1234567ll) == "1234567");

    REQUIRE(csv_field("plain") == "plain");
    REQUIRE(csv_field("a,b") == "\"a,b\"");
    REQUIRE(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    REQUIRE(csv_field("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("csv tables enforce their header width") {
    CsvTable t({"a", "b"});
    t.add_row({"1", "2"});
    REQUIRE_THROWS_AS(t.add_row({"1"}), std::domain_error);
    REQUIRE(t.to_string() == "a,b\n1,2\n");
}

TEST_CASE("run sections parse, sort, and inherit defaults") {
    ExperimentConfig cfg = parse_config(
        "# comment\n"
        "[scenario]\n"
        "name = rotation\n"
        "angle = 0.25\n"
        "\n"
        "[run.2]\n"
        "operation = closure_average\n"
        "function = cossq\n"
        "\n"
        "[run.1]\n"
        "operation = folner_average\n"
        "function = cos1\n"
        "point = circle:0.125\n");
    REQUIRE(cfg.scenario.name == "rotation");
    REQUIRE(cfg.scenario.get("angle", 0.0) == 0.25);
    REQUIRE(cfg.seed == 0);
    REQUIRE(cfg.output_dir == ".");
    REQUIRE(cfg.runs.size() == 2);
    REQUIRE(cfg.runs[0].index == 1);
    REQUIRE(cfg.runs[0].operation == "folner_average");
    REQUIRE(cfg.runs[1].index == 2);
}

TEST_CASE("config errors carry their line number") {
    const std::string head = "[scenario]\nname = rotation\n";

    REQUIRE(error_of("[garbage]\n").find("config line 1") != std::string::npos);
    REQUIRE(error_of(head + "[run.1]\n[run.1]\n").find("config line 4") !=
            std::string::npos);
    REQUIRE(error_of(head + "[run.1]\noperation = teleport\n").find("teleport") !=
            std::string::npos);
    REQUIRE(error_of(head + "[run.1]\noperation = folner_average\n") .find("function") !=
            std::string::npos);
    REQUIRE(error_of(head + "[run.1]\noperation = folner_average\nfunction = warp\n")
                .find("warp") != std::string::npos);
    REQUIRE(error_of(head + "[run.1]\noperation = folner_average\nfunction = cos1\n"
                            "point = circle:zebra\n")
                .find("config line") != std::string::npos);
    REQUIRE(error_of(head + "[run.1]\noperation = folner_average\nfunction = cos1\n"
                            "Volume = 11\n")
                .find("config line 6") != std::string::npos);
    REQUIRE(error_of(head + "[run.1]\noperation = census\nfunction = cos1\n")
                .find("not accept key") != std::string::npos);
    REQUIRE(error_of("[scenario]\nname = atlantis\n").find("atlantis") !=
            std::string::npos);
}

TEST_CASE("integer values accept power notation") {
    ExperimentConfig cfg = parse_config(
        "[scenario]\nname = rotation\n"
        "[run.1]\noperation = folner_average\nfunction = cos1\nn_max = 2^20\n");
    REQUIRE(cfg.runs.size() == 1);

    REQUIRE(error_of("[scenario]\nname = rotation\n"
                     "[run.1]\noperation = folner_average\nfunction = cos1\nn_max = 2^\n")
                .find("config line") != std::string::npos);
}

TEST_CASE("the runner writes checked deterministic csv files") {
    TempDir tmp;
    ExperimentConfig cfg = parse_config(
        "[scenario]\nname = rotation\n"
        "[run.1]\noperation = folner_average\nfunction = cos1\npoint = circle:0.2\n"
        "expect_re = 0\nexpect_tol = 1e-2\n"
        "[run.2]\noperation = almost_periodicity\nfunction = cos1\neps = 0.2\n"
        "expect = almost-periodic\n");
    cfg.output_dir = tmp.path.string();

    RunSummary first = run(cfg);
    REQUIRE(first.ok());
    REQUIRE(first.outcomes.size() == 2);
    for (const RunOutcome& o : first.outcomes) {
        REQUIRE(o.status == "ok");
        REQUIRE(o.checked);
        REQUIRE(o.check_ok);
        REQUIRE(std::filesystem::exists(o.csv_path));
    }
    REQUIRE(first.to_text().find("run.1") != std::string::npos);

    std::string bytes1 = slurp(first.outcomes[0].csv_path);
    REQUIRE(bytes1.find("schema_version") != std::string::npos);

    RunSummary second = run(cfg);
    REQUIRE(slurp(second.outcomes[0].csv_path) == bytes1);
}

TEST_CASE("failed expectations and runtime errors are reported, not hidden") {
    TempDir tmp;
    ExperimentConfig bad_expect = parse_config(
        "[scenario]\nname = rotation\n"
        "[run.1]\noperation = folner_average\nfunction = cos1\npoint = circle:0.2\n"
        "expect_re = 0.4\n");
    bad_expect.output_dir = tmp.path.string();
    RunSummary s1 = run(bad_expect);
    REQUIRE(!s1.ok());
    REQUIRE(s1.outcomes[0].checked);
    REQUIRE(!s1.outcomes[0].check_ok);

    ExperimentConfig runtime_err = parse_config(
        "[scenario]\nname = rotation\n"
        "[run.1]\noperation = stability_probe\neps = -1\n");
    runtime_err.output_dir = tmp.path.string();
    RunSummary s2 = run(runtime_err);
    REQUIRE(!s2.ok());
    REQUIRE(s2.outcomes[0].status == "error");
    REQUIRE(!s2.outcomes[0].message.empty());
}

TEST_CASE("scenario listing names every fixture") {
    std::string listing = list_scenarios();
    for (const std::string& name : scenario_names())
        REQUIRE(listing.find(name) != std::string::npos);
    REQUIRE(listing.find("point syntax") != std::string::npos);
}
