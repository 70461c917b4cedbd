// Command-line front end: runs experiment configs, lists the built-in
// scenarios, and executes the canned ground-truth suite.
//
// Exit codes: 0 success, 1 ground-truth mismatch or failed operation,
// 2 config or usage error, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "orbitkit/experiment.hpp"

namespace {

int run_config(const std::string& config_path, bool seed_given, long long seed_override,
               const std::string& out_override) {
    std::ifstream f(config_path);
    if (!f) {
        std::cerr << "cannot open config file " << config_path << "\n";
        return 3;
    }
    std::stringstream buffer;
    buffer << f.rdbuf();

    orbitkit::ExperimentConfig cfg;
    try {
        cfg = orbitkit::parse_config(buffer.str());
    } catch (const std::invalid_argument& ex) {
        std::cerr << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    }
    if (seed_given) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_override.empty()) cfg.output_dir = out_override;

    try {
        orbitkit::RunSummary summary = orbitkit::run(cfg);
        std::cout << summary.to_text();
        return summary.ok() ? 0 : 1;
    } catch (const orbitkit::resource_error& ex) {
        std::cerr << "I/O error: " << ex.what() << "\n";
        return 3;
    }
}

int run_verify(std::uint64_t seed, const std::string& out_dir) {
    try {
        auto summaries = orbitkit::verify_fixtures(out_dir.empty() ? "." : out_dir, seed);
        bool all_ok = true;
        for (const auto& s : summaries) {
            std::cout << s.to_text();
            all_ok = all_ok && s.ok();
        }
        std::cout << (all_ok ? "verify-fixtures: all checks passed\n"
                             : "verify-fixtures: CHECKS FAILED\n");
        return all_ok ? 0 : 1;
    } catch (const orbitkit::resource_error& ex) {
        std::cerr << "I/O error: " << ex.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbit: group-action averaging, stability, and census experiments"};

    std::string config_path;
    long long seed_override = 0;
    bool seed_given = false;
    std::string out_dir;
    bool list_flag = false;
    bool verify_flag = false;

    app.add_option("--config", config_path, "experiment config file");
    auto* seed_opt = app.add_option("--seed", seed_override, "seed override");
    app.add_option("--out", out_dir, "output directory override");
    app.add_flag("--list-scenarios", list_flag, "print the scenario catalog and exit");
    app.add_flag("--verify-fixtures", verify_flag, "run the ground-truth fixture suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    seed_given = seed_opt->count() > 0;

    if (list_flag) {
        std::cout << orbitkit::list_scenarios();
        return 0;
    }
    if (verify_flag)
        return run_verify(seed_given ? static_cast<std::uint64_t>(seed_override) : 1, out_dir);
    if (config_path.empty()) {
        std::cerr << "one of --config, --list-scenarios, --verify-fixtures is required\n";
        return 2;
    }
    return run_config(config_path, seed_given, seed_override, out_dir);
}
