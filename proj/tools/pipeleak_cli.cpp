// Command-line front end for the pipeleak simulation library. Talks to the
// engine exclusively through the public C interface.
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pipeleak/pipeleak.h"

namespace fs = std::filesystem;

namespace {

int exit_code_for(int plk_code) {
    switch (plk_code) {
        case PLK_OK: return 0;
        case PLK_ERR_CONFIG: return 2;
        case PLK_ERR_DIVERGED: return 3;
        default: return 1;
    }
}

int report_error(const char* what, int plk_code) {
    std::fprintf(stderr, "pipeleak: %s: %s\n", what, plk_last_error());
    return exit_code_for(plk_code);
}

struct ScenarioHandle {
    plk_scenario* ptr = nullptr;
    ~ScenarioHandle() { plk_scenario_free(ptr); }
};

struct RunHandle {
    plk_run* ptr = nullptr;
    ~RunHandle() { plk_run_free(ptr); }
};

struct GainHandle {
    plk_gain_table* ptr = nullptr;
    ~GainHandle() { plk_gain_table_free(ptr); }
};

int load_with_overrides(const std::string& config_path, std::optional<long long> seed,
                        std::optional<int> cells, ScenarioHandle& scenario) {
    if (int rc = plk_scenario_load_file(config_path.c_str(), &scenario.ptr)) return rc;
    if (seed)
        if (int rc = plk_scenario_set_seed(scenario.ptr, *seed)) return rc;
    if (cells)
        if (int rc = plk_scenario_set_cells(scenario.ptr, *cells)) return rc;
    const char* warnings = plk_scenario_warnings(scenario.ptr);
    if (warnings && *warnings) std::fprintf(stderr, "%s", warnings);
    return PLK_OK;
}

int write_run_outputs(const plk_run* run, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "pipeleak: cannot create %s\n", out_dir.c_str());
        return 1;
    }
    const fs::path csv = out_dir / "timeseries.csv";
    const fs::path metrics = out_dir / "metrics.json";
    if (int rc = plk_run_write_timeseries_csv(run, csv.c_str()))
        return report_error("writing time series", rc);
    if (int rc = plk_run_write_metrics_json(run, metrics.c_str()))
        return report_error("writing metrics", rc);
    std::printf("wrote %s\n", csv.c_str());
    std::printf("wrote %s\n", metrics.c_str());
    return 0;
}

int cmd_run(const std::string& config_path, std::optional<long long> seed,
            std::optional<int> cells, const std::string& out_dir) {
    ScenarioHandle scenario;
    if (int rc = load_with_overrides(config_path, seed, cells, scenario))
        return report_error("loading config", rc);
    RunHandle run;
    if (int rc = plk_run_scenario(scenario.ptr, &run.ptr))
        return report_error("running scenario", rc);
    if (int rc = write_run_outputs(run.ptr, out_dir)) return rc;
    const char* metrics_json = nullptr;
    plk_run_metrics_json(run.ptr, &metrics_json);
    std::printf("%s", metrics_json);
    return 0;
}

int cmd_gains(const std::string& config_path, std::optional<long long> seed,
              std::optional<int> cells, const std::string& out_dir) {
    ScenarioHandle scenario;
    if (int rc = load_with_overrides(config_path, seed, cells, scenario))
        return report_error("loading config", rc);
    GainHandle gains;
    if (int rc = plk_gain_table_compute(scenario.ptr, &gains.ptr))
        return report_error("computing gains", rc);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const fs::path csv = fs::path(out_dir) / "gains.csv";
    if (int rc = plk_gain_table_write_csv(gains.ptr, csv.c_str()))
        return report_error("writing gain table", rc);
    std::printf("wrote %s\n", csv.c_str());
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, std::optional<long long> seed,
              std::optional<int> cells, const std::string& out_dir) {
    std::printf("%s,chi_final,chi_final_error,delta_final,delta_final_error,"
                "detection_time_s\n",
                param.c_str());
    for (double value : values) {
        ScenarioHandle scenario;
        if (int rc = load_with_overrides(config_path, seed, cells, scenario))
            return report_error("loading config", rc);
        if (int rc = plk_scenario_set_param(scenario.ptr, param.c_str(), value))
            return report_error("setting parameter", rc);
        RunHandle run;
        if (int rc = plk_run_scenario(scenario.ptr, &run.ptr))
            return report_error("running scenario", rc);

        char label[64];
        std::snprintf(label, sizeof label, "%s=%.12g", param.c_str(), value);
        const fs::path run_dir = fs::path(out_dir) / label;
        std::error_code ec;
        fs::create_directories(run_dir, ec);
        plk_run_write_timeseries_csv(run.ptr, (run_dir / "timeseries.csv").c_str());
        plk_run_write_metrics_json(run.ptr, (run_dir / "metrics.json").c_str());

        const char* metrics_json = nullptr;
        plk_run_metrics_json(run.ptr, &metrics_json);
        const auto m = nlohmann::json::parse(metrics_json);
        std::printf("%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", value,
                    m["chi_final"].get<double>(), m["chi_final_error"].get<double>(),
                    m["delta_final"].get<double>(), m["delta_final_error"].get<double>(),
                    m["detection_time_s"].get<double>());
    }
    return 0;
}

void print_check(const char* name, int passed, const char* detail, void* user) {
    auto* failed = static_cast<int*>(user);
    if (!passed) ++*failed;
    std::printf("[%s] %s\n        %s\n", passed ? "PASS" : "FAIL", name, detail);
}

int cmd_validate() {
    int failed = 0;
    int cb_failed = 0;
    if (int rc = plk_validate(print_check, &cb_failed, &failed))
        return report_error("running validation", rc);
    std::printf("%d check(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pipeline leak detection simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string param;
    std::string values_csv;
    std::optional<long long> seed;
    std::optional<int> cells;

    const auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("config", config_path, "scenario config (JSON)")->required();
        cmd->add_option("--seed", seed, "override the noise seed");
        cmd->add_option("--cells", cells, "override the grid cell count");
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario and write its outputs");
    add_common(run, true);

    CLI::App* gains = app.add_subcommand("gains", "dump the observer gain table as CSV");
    add_common(gains, true);

    CLI::App* sweep = app.add_subcommand("sweep", "run a scenario across parameter values");
    add_common(sweep, true);
    sweep->add_option("--param", param, "dotted config key, e.g. adaptation.gamma")->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();

    app.add_subcommand("validate", "run the built-in acceptance checks");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, seed, cells, out_dir);
    if (gains->parsed()) return cmd_gains(config_path, seed, cells, out_dir);
    if (sweep->parsed()) {
        std::vector<double> values;
        std::string token;
        for (char c : values_csv + ",") {
            if (c == ',') {
                if (!token.empty()) {
                    try {
                        values.push_back(std::stod(token));
                    } catch (const std::exception&) {
                        std::fprintf(stderr, "pipeleak: bad sweep value: %s\n", token.c_str());
                        return 2;
                    }
                    token.clear();
                }
            } else {
                token += c;
            }
        }
        if (values.empty()) {
            std::fprintf(stderr, "pipeleak: --values is empty\n");
            return 2;
        }
        return cmd_sweep(config_path, param, values, seed, cells, out_dir);
    }
    return cmd_validate();
}
