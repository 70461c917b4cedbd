#ifndef ORBITKIT_EXPERIMENT_HPP
#define ORBITKIT_EXPERIMENT_HPP

// Config-driven batch runner. A plain-text config names one scenario and an
// ordered list of operations; run() executes them, writes one CSV per
// operation, and collects a human-readable summary with optional ground-truth
// comparisons. verify_fixtures() is the canned suite of known-answer checks
// the CLI exposes as --verify-fixtures.
//
// Config grammar (lowercase snake-case keys, '#' or ';' comments):
//
//   [scenario]
//   name = rotation          # any name from scenario_names()
//   q = 7                    # scenario parameters, numeric
//
//   [run.1]
//   operation = folner_average
//   function = cos1
//   point = circle:0.25      # optional; default is a seeded sample
//   n_max = 2^20             # integers accept a^b
//
//   [output]
//   dir = out
//   seed = 1
//
// Errors carry the config line number. Integer keys accept "a^b" powers so
// budgets read the way they are usually quoted.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "orbitkit/averaging.hpp"
#include "orbitkit/census.hpp"
#include "orbitkit/csv.hpp"
#include "orbitkit/measure.hpp"
#include "orbitkit/scenarios.hpp"
#include "orbitkit/stability.hpp"

namespace orbitkit {

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct RunRequest {
    int index = 0;
    std::string operation;
    std::vector<ConfigEntry> entries;
    int line = 0;  // line of the [run.N] header

    const ConfigEntry* find(const std::string& key) const {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    }
};

struct ExperimentConfig {
    ScenarioSpec scenario;
    std::vector<RunRequest> runs;
    std::string output_dir = ".";
    std::string file_prefix = "run";
    std::uint64_t seed = 0;
};

namespace detail {

inline std::invalid_argument config_error(int line, const std::string& msg) {
    return std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool valid_key(const std::string& k) {
    if (k.empty() || !(k[0] >= 'a' && k[0] <= 'z')) return false;
    for (char c : k)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

inline long long config_int(const ConfigEntry& e) {
    try {
        std::size_t caret = e.value.find('^');
        if (caret == std::string::npos) return parse_int(e.value, e.key);
        long long base = parse_int(e.value.substr(0, caret), e.key);
        long long exp = parse_int(e.value.substr(caret + 1), e.key);
        if (exp < 0 || exp > 62) throw std::domain_error("exponent out of range");
        long long v = 1;
        for (long long i = 0; i < exp; ++i) v *= base;
        return v;
    } catch (const std::exception&) {
        throw config_error(e.line, "key '" + e.key + "': cannot parse integer '" + e.value + "'");
    }
}

inline double config_double(const ConfigEntry& e) {
    try {
        return parse_double(e.value, e.key);
    } catch (const std::exception&) {
        throw config_error(e.line, "key '" + e.key + "': cannot parse number '" + e.value + "'");
    }
}

struct OperationSchema {
    std::vector<std::string> allowed;   // keys accepted beyond "operation"
    std::vector<std::string> required;  // subset of allowed that must appear
};

inline const std::map<std::string, OperationSchema>& operation_schemas() {
    static const std::map<std::string, OperationSchema> table = {
        {"folner_average",
         {{"function", "point", "tol", "n_max", "expect_re", "expect_im", "expect_tol"},
          {"function"}}},
        {"closure_average",
         {{"function", "point", "quadrature", "expect_re", "expect_im", "expect_tol"},
          {"function"}}},
        {"inner_product",
         {{"function", "function2", "point", "tol", "n_max", "expect_re", "expect_im",
           "expect_tol"},
          {"function", "function2"}}},
        {"expectation_field",
         {{"function", "grid", "tol", "n_max", "jump_window", "jump_threshold", "expect"},
          {"function"}}},
        {"stability_probe",
         {{"point", "eps", "trials", "horizon", "probe_radius", "expect"}, {"eps"}}},
        {"almost_periodicity",
         {{"function", "point", "eps", "translates", "probes", "net_cap", "expect"},
          {"function", "eps"}}},
        {"census", {{"samples", "cutoff", "cluster_sep"}, {}}},
        {"classify", {{"samples", "cutoff", "cluster_sep", "cluster_bound", "expect"}, {}}},
        {"covering_index",
         {{"set_a", "set_b", "pool_target", "witness_cap", "expect_min", "expect_max"},
          {"set_a", "set_b"}}},
        {"invariant_measure",
         {{"set", "reference", "anchor", "k_lo", "k_hi", "tol", "expect_value", "expect_tol"},
          {"set", "reference"}}},
        {"visit_frequency",
         {{"set", "anchor", "tol", "n_max", "expect_re", "expect_tol"}, {"set"}}},
        {"uniqueness_check",
         {{"set_a", "set_b", "reference", "anchor", "rel_tol", "expect"},
          {"set_a", "set_b", "reference"}}},
    };
    return table;
}

// value types per key, so malformed numbers surface as config errors at parse
// time instead of run failures halfway through a batch
inline bool integer_valued_key(const std::string& k) {
    static const std::vector<std::string> keys = {
        "n_max",   "quadrature", "grid",        "trials",      "horizon",     "translates",
        "probes",  "net_cap",    "samples",     "cutoff",      "cluster_bound",
        "k_lo",    "k_hi",       "pool_target", "witness_cap", "expect_min",  "expect_max"};
    return std::find(keys.begin(), keys.end(), k) != keys.end();
}

inline bool real_valued_key(const std::string& k) {
    static const std::vector<std::string> keys = {
        "tol",      "eps",       "probe_radius", "jump_window", "jump_threshold",
        "cluster_sep", "rel_tol", "expect_re",    "expect_im",   "expect_tol",
        "expect_value"};
    return std::find(keys.begin(), keys.end(), k) != keys.end();
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool seen_scenario = false, seen_output = false;
    std::string section;
    RunRequest* current_run = nullptr;

    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        lines.push_back(cur);
    }

    for (int ln = 1; ln <= static_cast<int>(lines.size()); ++ln) {
        std::string raw = lines[static_cast<std::size_t>(ln - 1)];
        std::size_t comment = raw.find_first_of("#;");
        if (comment != std::string::npos) raw = raw.substr(0, comment);
        std::string line = detail::trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw detail::config_error(ln, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            current_run = nullptr;
            if (section == "scenario") {
                if (seen_scenario) throw detail::config_error(ln, "duplicate [scenario] section");
                seen_scenario = true;
            } else if (section == "output") {
                if (seen_output) throw detail::config_error(ln, "duplicate [output] section");
                seen_output = true;
            } else if (section.rfind("run.", 0) == 0) {
                std::string num = section.substr(4);
                long long idx;
                try {
                    idx = detail::parse_int(num, "run index");
                } catch (const std::exception&) {
                    throw detail::config_error(ln, "bad run index in [" + section + "]");
                }
                for (const auto& r : cfg.runs)
                    if (r.index == idx)
                        throw detail::config_error(ln, "duplicate section [" + section + "]");
                RunRequest r;
                r.index = static_cast<int>(idx);
                r.line = ln;
                cfg.runs.push_back(std::move(r));
                current_run = &cfg.runs.back();
            } else {
                throw detail::config_error(ln, "unknown section [" + section + "]");
            }
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw detail::config_error(ln, "expected key = value, got '" + line + "'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (!detail::valid_key(key))
            throw detail::config_error(ln, "invalid key '" + key + "' (lowercase snake-case)");
        if (value.empty()) throw detail::config_error(ln, "key '" + key + "' has no value");

        if (section == "scenario") {
            if (key == "name") {
                cfg.scenario.name = value;
            } else {
                ConfigEntry e{key, value, ln};
                cfg.scenario.set(key, detail::config_double(e));
            }
        } else if (section == "output") {
            if (key == "dir") {
                cfg.output_dir = value;
            } else if (key == "seed") {
                ConfigEntry e{key, value, ln};
                cfg.seed = static_cast<std::uint64_t>(detail::config_int(e));
            } else {
                throw detail::config_error(ln, "unknown key '" + key + "' in [output]");
            }
        } else if (current_run != nullptr) {
            if (current_run->find(key) != nullptr)
                throw detail::config_error(ln, "duplicate key '" + key + "' in run section");
            if (key == "operation")
                current_run->operation = value;
            else
                current_run->entries.push_back({key, value, ln});
        } else {
            throw detail::config_error(ln, "key '" + key + "' outside any section");
        }
    }

    if (!seen_scenario || cfg.scenario.name.empty())
        throw detail::config_error(1, "missing [scenario] section with a name");
    {
        auto names = scenario_names();
        bool known = false;
        for (const auto& n : names) known = known || n == cfg.scenario.name;
        if (!known)
            throw detail::config_error(1, "unknown scenario '" + cfg.scenario.name + "'");
    }
    if (cfg.runs.empty()) throw detail::config_error(1, "config declares no [run.N] sections");

    // validate operations, their keys, and every spec-valued entry against the
    // actual scenario, so a typo fails at parse time, not mid-run
    ActionScenario sc = build_scenario(cfg.scenario);
    const auto& ops = detail::operation_schemas();
    for (const auto& r : cfg.runs) {
        if (r.operation.empty())
            throw detail::config_error(r.line, "run section lacks an operation key");
        auto it = ops.find(r.operation);
        if (it == ops.end())
            throw detail::config_error(r.line, "unknown operation '" + r.operation + "'");
        for (const auto& e : r.entries) {
            bool allowed = false;
            for (const auto& k : it->second.allowed) allowed = allowed || k == e.key;
            if (!allowed)
                throw detail::config_error(
                    e.line, "operation " + r.operation + " does not accept key '" + e.key + "'");
            if (e.key == "function" || e.key == "function2") {
                try {
                    sc.function_named(e.value);
                } catch (const std::exception&) {
                    throw detail::config_error(
                        e.line, "function '" + e.value + "' is not in the " + sc.name +
                                    " catalog");
                }
            } else if (e.key == "point" || e.key == "anchor") {
                try {
                    sc.parse_point(e.value);
                } catch (const std::exception& ex) {
                    throw detail::config_error(e.line,
                                               std::string("bad point spec: ") + ex.what());
                }
            } else if (e.key == "set" || e.key == "set_a" || e.key == "set_b" ||
                       e.key == "reference") {
                if (!sc.subset_from_spec)
                    throw detail::config_error(
                        e.line, "scenario " + sc.name + " does not define subset specs");
                try {
                    sc.subset_from_spec(e.value);
                } catch (const std::exception& ex) {
                    throw detail::config_error(e.line,
                                               std::string("bad subset spec: ") + ex.what());
                }
            } else if (detail::integer_valued_key(e.key)) {
                (void)detail::config_int(e);
            } else if (detail::real_valued_key(e.key)) {
                (void)detail::config_double(e);
            }
        }
        for (const auto& k : it->second.required)
            if (r.find(k) == nullptr)
                throw detail::config_error(
                    r.line, "operation " + r.operation + " requires key '" + k + "'");
    }
    std::sort(cfg.runs.begin(), cfg.runs.end(),
              [](const RunRequest& a, const RunRequest& b) { return a.index < b.index; });
    return cfg;
}

struct RunOutcome {
    int index = 0;
    std::string operation;
    std::string status;  // ok | non-converged | error
    std::string message;
    std::string csv_path;
    bool checked = false;  // an expect key was declared and evaluated
    bool check_ok = false;
    std::string check_note;
    double wall_ms = 0.0;
};

struct RunSummary {
    std::string scenario_name;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::vector<RunOutcome> outcomes;

    bool ok() const {
        for (const auto& o : outcomes) {
            if (o.status == "error") return false;
            if (o.checked && !o.check_ok) return false;
        }
        return true;
    }

    std::string to_text() const {
        std::string out = "scenario " + scenario_name + ", seed " + std::to_string(seed) + "\n";
        for (const auto& o : outcomes) {
            out += "  run." + std::to_string(o.index) + " " + o.operation + ": " + o.status;
            if (o.checked) out += o.check_ok ? " [check ok]" : " [CHECK FAILED]";
            if (!o.message.empty()) out += " - " + o.message;
            if (!o.check_note.empty()) out += " (" + o.check_note + ")";
            if (!o.csv_path.empty()) out += " -> " + o.csv_path;
            char buf[32];
            std::snprintf(buf, sizeof buf, " (%.0f ms)", o.wall_ms);
            out += buf;
            out += "\n";
        }
        out += ok() ? "result: ok\n" : "result: FAILED\n";
        return out;
    }
};

namespace detail {

inline std::string format_element(const GroupElement& g) {
    std::string out;
    for (std::size_t i = 0; i < g.word.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(g.word[i]);
    }
    return out.empty() ? "e" : out;
}

inline Point run_point(const ActionScenario& sc, const RunRequest& r, const char* key,
                       std::uint64_t seed) {
    if (const ConfigEntry* e = r.find(key)) {
        try {
            return sc.parse_point(e->value);
        } catch (const std::exception& ex) {
            throw config_error(e->line, std::string("bad point spec: ") + ex.what());
        }
    }
    return sc.space.sample_points(1, seed ^ 0x5bd1e995u).front();
}

inline CompactSubset run_subset(const ActionScenario& sc, const RunRequest& r, const char* key) {
    const ConfigEntry* e = r.find(key);
    if (e == nullptr)
        throw config_error(r.line, std::string("operation ") + r.operation +
                                       " requires key '" + key + "'");
    if (!sc.subset_from_spec)
        throw config_error(e->line, "scenario " + sc.name + " does not define subset specs");
    try {
        return sc.subset_from_spec(e->value);
    } catch (const std::exception& ex) {
        throw config_error(e->line, std::string("bad subset spec: ") + ex.what());
    }
}

inline std::string run_function(const RunRequest& r, const char* key, const char* fallback) {
    if (const ConfigEntry* e = r.find(key)) return e->value;
    if (fallback != nullptr) return fallback;
    throw config_error(r.line,
                       "operation " + r.operation + " requires key '" + std::string(key) + "'");
}

inline AveragingOptions run_avg_options(const RunRequest& r, std::uint64_t) {
    AveragingOptions opts;
    if (const ConfigEntry* e = r.find("tol")) opts.tol = config_double(*e);
    if (const ConfigEntry* e = r.find("n_max")) opts.n_max = config_int(*e);
    if (const ConfigEntry* e = r.find("jump_window")) opts.jump_window = config_double(*e);
    if (const ConfigEntry* e = r.find("jump_threshold")) opts.jump_threshold = config_double(*e);
    if (const ConfigEntry* e = r.find("quadrature"))
        opts.quadrature = static_cast<int>(config_int(*e));
    return opts;
}

// expect_re / expect_im / expect_tol comparison for scalar-valued operations
inline void check_scalar(const RunRequest& r, RunOutcome& out, cx value) {
    const ConfigEntry* re = r.find("expect_re");
    const ConfigEntry* im = r.find("expect_im");
    const ConfigEntry* ev = r.find("expect_value");
    if (re == nullptr && im == nullptr && ev == nullptr) return;
    double tol = 1e-2;
    if (const ConfigEntry* t = r.find("expect_tol")) tol = config_double(*t);
    out.checked = true;
    out.check_ok = true;
    std::string note;
    auto compare = [&](double got, double want, const char* what) {
        if (std::abs(got - want) <= tol) return;
        out.check_ok = false;
        note += std::string(note.empty() ? "" : "; ") + what + " " + csv_number(got) +
                " differs from expected " + csv_number(want) + " by more than " +
                csv_number(tol);
    };
    if (re != nullptr) compare(value.real(), config_double(*re), "re");
    if (ev != nullptr) compare(value.real(), config_double(*ev), "value");
    if (im != nullptr) compare(value.imag(), config_double(*im), "im");
    out.check_note = out.check_ok ? "value within tolerance of expectation" : note;
}

inline void check_verdict(const RunRequest& r, RunOutcome& out, const std::string& got,
                          const std::map<std::string, std::string>& aliases) {
    const ConfigEntry* e = r.find("expect");
    if (e == nullptr) return;
    out.checked = true;
    auto it = aliases.find(e->value);
    if (it == aliases.end())
        throw config_error(e->line, "unknown expect value '" + e->value + "'");
    out.check_ok = got == it->second;
    out.check_note = "expected " + it->second + ", got " + got;
}

}  // namespace detail

inline RunSummary run(const ExperimentConfig& cfg) {
    RunSummary summary;
    summary.scenario_name = cfg.scenario.name;
    summary.seed = cfg.seed;
    summary.output_dir = cfg.output_dir;

    ActionScenario sc = build_scenario(cfg.scenario);

    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec)
        throw resource_error("cannot create output directory " + cfg.output_dir + ": " +
                             ec.message());

    for (const RunRequest& r : cfg.runs) {
        RunOutcome out;
        out.index = r.index;
        out.operation = r.operation;
        out.status = "ok";
        CsvTable table({});
        bool have_table = false;

        auto started = std::chrono::steady_clock::now();
        try {
            if (r.operation == "folner_average" || r.operation == "closure_average" ||
                r.operation == "visit_frequency") {
                Point x = detail::run_point(sc, r, r.operation == "visit_frequency" ? "anchor"
                                                                                    : "point",
                                            cfg.seed);
                AveragingOptions opts = detail::run_avg_options(r, cfg.seed);
                AverageReport rep;
                std::string fn_label;
                if (r.operation == "folner_average") {
                    fn_label = detail::run_function(r, "function", nullptr);
                    rep = folner_average(sc, fn_label, x, opts);
                } else if (r.operation == "closure_average") {
                    fn_label = detail::run_function(r, "function", nullptr);
                    rep = orbit_closure_average(sc, fn_label, x, opts);
                } else {
                    const ConfigEntry* e = r.find("set");
                    if (e == nullptr)
                        throw detail::config_error(r.line, "visit_frequency requires key 'set'");
                    fn_label = e->value;
                    rep = visit_frequency(sc, detail::run_subset(sc, r, "set"), x, opts);
                }
                if (!rep.converged) {
                    out.status = "non-converged";
                    out.message = "stage difference above tol at n_max";
                }
                table = CsvTable({"schema_version", "operation", "scenario", "function", "point",
                                  "value_re", "value_im", "converged", "stages", "sup_norm",
                                  "finite_orbit", "orbit_cardinality"});
                table.add_row({csv_schema_version, r.operation, sc.name, fn_label,
                               sc.format_point(x), csv_number(rep.value.real()),
                               csv_number(rep.value.imag()), rep.converged ? "1" : "0",
                               csv_number(static_cast<long long>(rep.stages.size())),
                               csv_number(rep.sup_norm), rep.finite_orbit ? "1" : "0",
                               csv_number(rep.orbit_cardinality)});
                have_table = true;
                detail::check_scalar(r, out, rep.value);
            } else if (r.operation == "inner_product") {
                Point x = detail::run_point(sc, r, "point", cfg.seed);
                std::string f = detail::run_function(r, "function", nullptr);
                std::string g = detail::run_function(r, "function2", nullptr);
                AverageReport rep = inner_product(sc, f, g, x, detail::run_avg_options(r, cfg.seed));
                if (!rep.converged) {
                    out.status = "non-converged";
                    out.message = "stage difference above tol at n_max";
                }
                table = CsvTable({"schema_version", "operation", "scenario", "function",
                                  "function2", "point", "value_re", "value_im", "converged",
                                  "stages", "sup_norm"});
                table.add_row({csv_schema_version, r.operation, sc.name, f, g, sc.format_point(x),
                               csv_number(rep.value.real()), csv_number(rep.value.imag()),
                               rep.converged ? "1" : "0",
                               csv_number(static_cast<long long>(rep.stages.size())),
                               csv_number(rep.sup_norm)});
                have_table = true;
                detail::check_scalar(r, out, rep.value);
            } else if (r.operation == "expectation_field") {
                std::string f = detail::run_function(r, "function", nullptr);
                int grid_size = 100;
                if (const ConfigEntry* e = r.find("grid"))
                    grid_size = static_cast<int>(detail::config_int(*e));
                FieldReport rep =
                    expectation_field(sc, f, sc.field_grid(grid_size),
                                      detail::run_avg_options(r, cfg.seed));
                table = CsvTable({"schema_version", "point", "value_re", "value_im", "converged",
                                  "stages"});
                for (std::size_t i = 0; i < rep.grid.size(); ++i) {
                    const AverageReport& v = rep.values[i];
                    table.add_row({csv_schema_version, sc.format_point(rep.grid[i]),
                                   csv_number(v.value.real()), csv_number(v.value.imag()),
                                   v.converged ? "1" : "0",
                                   csv_number(static_cast<long long>(v.stages.size()))});
                }
                have_table = true;
                out.message = std::string(rep.verdict()) + ", max close-pair gap " +
                              csv_number(rep.jump_magnitude) + " at window " +
                              csv_number(rep.jump_window);
                if (rep.unconverged_count > 0) {
                    out.status = "non-converged";
                    out.message += ", " + std::to_string(rep.unconverged_count) +
                                   " grid points unconverged";
                }
                detail::check_verdict(r, out, rep.verdict(),
                                      {{"jump", "Jump-detected"},
                                       {"continuous", "Continuous-at-resolution"}});
            } else if (r.operation == "stability_probe") {
                const ConfigEntry* epse = r.find("eps");
                if (epse == nullptr)
                    throw detail::config_error(r.line, "stability_probe requires key 'eps'");
                double eps = detail::config_double(*epse);
                Point x = detail::run_point(sc, r, "point", cfg.seed);
                StabilityOptions opts;
                opts.seed = cfg.seed ^ 0x9e3779b9u;
                if (const ConfigEntry* e = r.find("trials"))
                    opts.trials = static_cast<int>(detail::config_int(*e));
                if (const ConfigEntry* e = r.find("horizon"))
                    opts.horizon_elements = detail::config_int(*e);
                if (const ConfigEntry* e = r.find("probe_radius"))
                    opts.probe_radius = detail::config_double(*e);
                StabilityReport rep = stability_probe(sc, x, eps, opts);
                table = CsvTable({"schema_version", "operation", "scenario", "point", "eps",
                                  "probe_radius", "delta_estimate", "witness_found",
                                  "witness_point", "witness_element", "witness_base_distance",
                                  "witness_attained_distance", "trials_used", "horizon_index",
                                  "horizon_size"});
                const bool w = rep.witness.has_value();
                table.add_row({csv_schema_version, r.operation, sc.name, sc.format_point(x),
                               csv_number(rep.eps), csv_number(rep.probe_radius),
                               csv_number(rep.delta_estimate), w ? "1" : "0",
                               w ? sc.format_point(rep.witness->y) : "",
                               w ? detail::format_element(rep.witness->g) : "",
                               w ? csv_number(rep.witness->base_distance) : "",
                               w ? csv_number(rep.witness->attained_distance) : "",
                               csv_number(static_cast<long long>(rep.trials_used)),
                               csv_number(static_cast<long long>(rep.horizon_index)),
                               csv_number(rep.horizon_size)});
                have_table = true;
                out.message = w ? "witness found" : "no witness within horizon";
                detail::check_verdict(r, out, w ? "witness" : "stable",
                                      {{"witness", "witness"}, {"stable", "stable"}});
            } else if (r.operation == "almost_periodicity") {
                const ConfigEntry* epse = r.find("eps");
                if (epse == nullptr)
                    throw detail::config_error(r.line, "almost_periodicity requires key 'eps'");
                double eps = detail::config_double(*epse);
                Point x = detail::run_point(sc, r, "point", cfg.seed);
                std::string f = detail::run_function(r, "function", nullptr);
                AlmostPeriodicityOptions opts;
                opts.seed = cfg.seed ^ 0x7f4a7c15u;
                if (const ConfigEntry* e = r.find("translates"))
                    opts.translate_count = static_cast<int>(detail::config_int(*e));
                if (const ConfigEntry* e = r.find("probes"))
                    opts.probe_count = static_cast<int>(detail::config_int(*e));
                if (const ConfigEntry* e = r.find("net_cap"))
                    opts.net_cap = static_cast<int>(detail::config_int(*e));
                AlmostPeriodicityReport rep = almost_periodicity_test(sc, f, x, eps, opts);
                table = CsvTable({"schema_version", "operation", "scenario", "function", "point",
                                  "eps", "net_size", "net_cap", "translate_count", "probe_count",
                                  "almost_periodic"});
                table.add_row({csv_schema_version, r.operation, sc.name, f, sc.format_point(x),
                               csv_number(rep.eps),
                               csv_number(static_cast<long long>(rep.net_size)),
                               csv_number(static_cast<long long>(rep.net_cap)),
                               csv_number(static_cast<long long>(rep.translate_count)),
                               csv_number(static_cast<long long>(rep.probe_count)),
                               rep.almost_periodic ? "1" : "0"});
                have_table = true;
                out.message = rep.almost_periodic
                                  ? "net of size " + std::to_string(rep.net_size)
                                  : "separated family of size " + std::to_string(rep.net_size);
                detail::check_verdict(r, out, rep.almost_periodic ? "ap" : "not-ap",
                                      {{"ap", "ap"},
                                       {"not-ap", "not-ap"},
                                       {"almost-periodic", "ap"},
                                       {"not-almost-periodic", "not-ap"}});
            } else if (r.operation == "census" || r.operation == "classify") {
                CensusOptions copts;
                copts.seed = cfg.seed ^ 0x2545f491u;
                int samples = 60;
                if (const ConfigEntry* e = r.find("samples"))
                    samples = static_cast<int>(detail::config_int(*e));
                if (const ConfigEntry* e = r.find("cutoff"))
                    copts.cutoff = static_cast<int>(detail::config_int(*e));
                if (const ConfigEntry* e = r.find("cluster_sep"))
                    copts.cluster_sep = detail::config_double(*e);
                OrbitCensus cen = census(sc, samples, copts);
                if (r.operation == "census") {
                    table = CsvTable({"schema_version", "scenario", "kind", "value",
                                      "representative", "orbit_count"});
                    for (long long c : cen.finite_cardinalities)
                        table.add_row({csv_schema_version, sc.name, "finite-orbit-cardinality",
                                       csv_number(c), "", "1"});
                    for (std::size_t c = 0; c < cen.cluster_representatives.size(); ++c)
                        table.add_row({csv_schema_version, sc.name, "infinite-closure-cluster",
                                       csv_number(static_cast<long long>(c)),
                                       sc.format_point(cen.cluster_representatives[c]),
                                       csv_number(static_cast<long long>(cen.cluster_sizes[c]))});
                    have_table = true;
                    out.message = std::to_string(cen.finite_cardinalities.size()) +
                                  " finite orbits, " +
                                  std::to_string(cen.infinite_cluster_count) +
                                  " infinite-closure clusters";
                } else {
                    ClassifyOptions kopts;
                    if (const ConfigEntry* e = r.find("cluster_bound"))
                        kopts.cluster_bound = static_cast<int>(detail::config_int(*e));
                    ModuleClassification cls = classify_module(cen, sc.flags, kopts);
                    std::string reasons;
                    for (std::size_t i = 0; i < cls.reasons.size(); ++i)
                        reasons += (i ? " | " : "") + cls.reasons[i];
                    table = CsvTable({"schema_version", "scenario", "label", "expected",
                                      "finite_orbits", "infinite_clusters", "reasons"});
                    table.add_row({csv_schema_version, sc.name, to_string(cls.label),
                                   sc.expected_classification,
                                   csv_number(static_cast<long long>(
                                       cen.finite_cardinalities.size())),
                                   csv_number(static_cast<long long>(cen.infinite_cluster_count)),
                                   reasons});
                    have_table = true;
                    out.message = to_string(cls.label);
                    if (const ConfigEntry* e = r.find("expect")) {
                        std::string want =
                            e->value == "auto" ? sc.expected_classification : e->value;
                        out.checked = true;
                        out.check_ok = want == to_string(cls.label);
                        out.check_note = "expected " + want + ", got " + to_string(cls.label);
                    }
                }
            } else if (r.operation == "covering_index") {
                CompactSubset a = detail::run_subset(sc, r, "set_a");
                CompactSubset b = detail::run_subset(sc, r, "set_b");
                CoveringOptions opts;
                opts.seed = cfg.seed ^ 0x94d049bbu;
                if (const ConfigEntry* e = r.find("pool_target"))
                    opts.pool_target = static_cast<int>(detail::config_int(*e));
                if (const ConfigEntry* e = r.find("witness_cap"))
                    opts.witness_cap = static_cast<int>(detail::config_int(*e));
                CoveringResult res = covering_index(sc, a, b, opts);
                table = CsvTable({"schema_version", "operation", "scenario", "set_a", "set_b",
                                  "index_value", "lower_bound", "pool_index", "pool_size",
                                  "witnesses_used"});
                table.add_row({csv_schema_version, r.operation, sc.name, r.find("set_a")->value,
                               r.find("set_b")->value, csv_number(res.index_value),
                               csv_number(res.lower_bound),
                               csv_number(static_cast<long long>(res.pool_index)),
                               csv_number(res.pool_size), csv_number(res.witnesses_used)});
                have_table = true;
                out.message = "index " + std::to_string(res.index_value);
                const ConfigEntry* lo = r.find("expect_min");
                const ConfigEntry* hi = r.find("expect_max");
                if (lo != nullptr || hi != nullptr) {
                    out.checked = true;
                    out.check_ok = true;
                    if (lo != nullptr && res.index_value < detail::config_int(*lo))
                        out.check_ok = false;
                    if (hi != nullptr && res.index_value > detail::config_int(*hi))
                        out.check_ok = false;
                    out.check_note = "index " + std::to_string(res.index_value) + " vs bounds [" +
                                     (lo ? lo->value : "-") + ", " + (hi ? hi->value : "-") + "]";
                }
            } else if (r.operation == "invariant_measure") {
                CompactSubset k_set = detail::run_subset(sc, r, "set");
                CompactSubset reference = detail::run_subset(sc, r, "reference");
                Point anchor = detail::run_point(sc, r, "anchor", cfg.seed);
                MeasureOptions opts;
                opts.seed = cfg.seed ^ 0xda3e39cbu;
                if (const ConfigEntry* e = r.find("k_lo"))
                    opts.k_lo = static_cast<int>(detail::config_int(*e));
                if (const ConfigEntry* e = r.find("k_hi"))
                    opts.k_hi = static_cast<int>(detail::config_int(*e));
                if (const ConfigEntry* e = r.find("tol")) opts.tol = detail::config_double(*e);
                MeasureEstimate est = invariant_measure_estimate(sc, k_set, reference, anchor,
                                                                 opts);
                table = CsvTable({"schema_version", "scenario", "set", "reference", "kind", "k",
                                  "lambda", "converged"});
                for (const auto& [k, lambda] : est.stages)
                    table.add_row({csv_schema_version, sc.name, r.find("set")->value,
                                   r.find("reference")->value, "stage",
                                   csv_number(static_cast<long long>(k)), csv_number(lambda),
                                   ""});
                table.add_row({csv_schema_version, sc.name, r.find("set")->value,
                               r.find("reference")->value, "value", "", csv_number(est.value),
                               est.converged ? "1" : "0"});
                have_table = true;
                if (!est.converged) {
                    out.status = "non-converged";
                    out.message = "stages did not settle by k_hi";
                } else {
                    out.message = "lambda " + csv_number(est.value);
                }
                detail::check_scalar(r, out, cx(est.value, 0.0));
            } else if (r.operation == "uniqueness_check") {
                CompactSubset a = detail::run_subset(sc, r, "set_a");
                CompactSubset b = detail::run_subset(sc, r, "set_b");
                CompactSubset reference = detail::run_subset(sc, r, "reference");
                Point anchor = detail::run_point(sc, r, "anchor", cfg.seed);
                double rel_tol = 3e-2;
                if (const ConfigEntry* e = r.find("rel_tol"))
                    rel_tol = detail::config_double(*e);
                MeasureOptions mopts;
                mopts.seed = cfg.seed ^ 0xda3e39cbu;
                UniquenessReport rep =
                    uniqueness_check(sc, a, b, reference, anchor, rel_tol, mopts);
                table = CsvTable({"schema_version", "scenario", "set_a", "set_b", "reference",
                                  "lambda1", "lambda2", "nu1", "nu2", "lhs", "rhs", "rel_error",
                                  "tol", "consistent"});
                table.add_row({csv_schema_version, sc.name, r.find("set_a")->value,
                               r.find("set_b")->value, r.find("reference")->value,
                               csv_number(rep.lambda1), csv_number(rep.lambda2),
                               csv_number(rep.nu1), csv_number(rep.nu2), csv_number(rep.lhs),
                               csv_number(rep.rhs), csv_number(rep.rel_error),
                               csv_number(rep.tol), rep.consistent ? "1" : "0"});
                have_table = true;
                out.message = "rel_error " + csv_number(rep.rel_error);
                detail::check_verdict(r, out, rep.consistent ? "consistent" : "inconsistent",
                                      {{"consistent", "consistent"},
                                       {"inconsistent", "inconsistent"}});
            } else {
                throw detail::config_error(r.line, "unknown operation '" + r.operation + "'");
            }
        } catch (const std::exception& ex) {
            out.status = "error";
            out.message = ex.what();
            have_table = false;
        }
        auto finished = std::chrono::steady_clock::now();
        out.wall_ms =
            std::chrono::duration<double, std::milli>(finished - started).count();

        if (have_table) {
            std::string filename =
                cfg.file_prefix + std::to_string(r.index) + "_" + r.operation + ".csv";
            std::filesystem::path path = std::filesystem::path(cfg.output_dir) / filename;
            table.write_file(path.string());
            out.csv_path = path.string();
        }
        summary.outcomes.push_back(std::move(out));
    }
    return summary;
}

inline std::string list_scenarios() {
    std::string out;
    for (const auto& name : scenario_names()) {
        ActionScenario sc = build_scenario(name);
        out += name + "\n";
        out += "  strata: " + std::to_string(sc.space.stratum_count()) +
               ", diameter: " + csv_number(sc.space.diameter()) + "\n";
        out += "  functions:";
        for (const auto& f : sc.catalog) out += " " + f.name;
        out += "\n";
        out += "  flags: metric=" + std::string(sc.flags.metric_space ? "yes" : "no") +
               " stable=" + (sc.flags.lyapunov_stable ? "yes" : "no") +
               " isometric=" + (sc.flags.isometric_action ? "yes" : "no");
        if (sc.flags.finite_card_bound)
            out += " finite_card_bound=" + std::to_string(*sc.flags.finite_card_bound);
        out += "\n";
        out += "  expected classification: " + sc.expected_classification + "\n";
        out += "  point syntax: " + sc.format_point(sc.space.sample_points(1, 1).front()) + "\n";
    }
    return out;
}

// The canned ground-truth suite behind --verify-fixtures: every scenario's
// classification against its declared expectation, plus the quantitative
// anchors (average agreement, finite-orbit exactness, the spiral jump, dyadic
// cylinder frequency, arc measure ratios). Deterministic for a fixed seed.
inline std::vector<RunSummary> verify_fixtures(const std::string& out_dir, std::uint64_t seed) {
    std::vector<RunSummary> summaries;

    auto classification_cfg = [&](const std::string& name) {
        ExperimentConfig cfg;
        cfg.scenario.name = name;
        cfg.output_dir = out_dir;
        cfg.file_prefix = "verify_" + name + "_";
        cfg.seed = seed;
        RunRequest r;
        r.index = 1;
        r.operation = "classify";
        r.entries.push_back({"expect", "auto", 0});
        cfg.runs.push_back(r);
        return cfg;
    };
    for (const auto& name : scenario_names()) summaries.push_back(run(classification_cfg(name)));

    {
        ExperimentConfig cfg;
        cfg.scenario.name = "rotation";
        cfg.output_dir = out_dir;
        cfg.file_prefix = "verify_rotation_anchor_";
        cfg.seed = seed;
        RunRequest r1;
        r1.index = 1;
        r1.operation = "folner_average";
        r1.entries = {{"function", "cos1", 0},
                      {"point", "circle:0.2", 0},
                      {"expect_re", "0", 0},
                      {"expect_im", "0", 0},
                      {"expect_tol", "1e-2", 0}};
        RunRequest r2;
        r2.index = 2;
        r2.operation = "closure_average";
        r2.entries = {{"function", "cossq", 0},
                      {"point", "circle:0.2", 0},
                      {"expect_re", "0.5", 0},
                      {"expect_tol", "1e-9", 0}};
        RunRequest r3;
        r3.index = 3;
        r3.operation = "invariant_measure";
        r3.entries = {{"set", "arc:0.3:0.125", 0},
                      {"reference", "arc:0.6:0.25", 0},
                      {"anchor", "circle:0.1", 0},
                      {"k_lo", "4", 0},
                      {"k_hi", "11", 0},
                      {"expect_value", "0.5", 0},
                      {"expect_tol", "2e-2", 0}};
        cfg.runs = {r1, r2, r3};
        summaries.push_back(run(cfg));
    }
    {
        ExperimentConfig cfg;
        cfg.scenario.name = "rational_rotation";
        cfg.output_dir = out_dir;
        cfg.file_prefix = "verify_rational_rotation_anchor_";
        cfg.seed = seed;
        RunRequest r1;
        r1.index = 1;
        r1.operation = "folner_average";
        r1.entries = {{"function", "cossq", 0},
                      {"point", "circle:0", 0},
                      {"expect_re", "0.5", 0},
                      {"expect_tol", "1e-12", 0}};
        cfg.runs = {r1};
        summaries.push_back(run(cfg));
    }
    {
        ExperimentConfig cfg;
        cfg.scenario.name = "spiral_two_circles";
        cfg.output_dir = out_dir;
        cfg.file_prefix = "verify_spiral_two_circles_field_";
        cfg.seed = seed;
        RunRequest r1;
        r1.index = 1;
        r1.operation = "expectation_field";
        r1.entries = {{"function", "z", 0},
                      {"grid", "100", 0},
                      {"n_max", "2^20", 0},
                      {"jump_window", "0.1", 0},
                      {"jump_threshold", "0.1", 0},
                      {"expect", "jump", 0}};
        cfg.runs = {r1};
        summaries.push_back(run(cfg));
    }
    {
        ExperimentConfig cfg;
        cfg.scenario.name = "dyadic_product";
        cfg.output_dir = out_dir;
        cfg.file_prefix = "verify_dyadic_product_frequency_";
        cfg.seed = seed;
        RunRequest r1;
        r1.index = 1;
        r1.operation = "visit_frequency";
        r1.entries = {{"set", "cyl:11", 0},
                      {"anchor", "level:0:0", 0},
                      {"expect_re", "0.25", 0},
                      {"expect_tol", "1e-2", 0}};
        RunRequest r2;
        r2.index = 2;
        r2.operation = "invariant_measure";
        r2.entries = {{"set", "cyl:11", 0},     {"reference", "all", 0},
                      {"anchor", "level:0:0", 0}, {"k_lo", "2", 0},
                      {"k_hi", "9", 0},           {"expect_value", "0.25", 0},
                      {"expect_tol", "2e-2", 0}};
        cfg.runs = {r1, r2};
        summaries.push_back(run(cfg));
    }
    return summaries;
}

}  // namespace orbitkit

#endif
