#include "pipeleak/pipeleak.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "core/harness.hpp"
#include "core/validation.hpp"

using namespace pipeleak;

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const DivergenceError& e) {
        return fail(PLK_ERR_DIVERGED, e.what());
    } catch (const ConfigError& e) {
        return fail(PLK_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(PLK_ERR_CONFIG, e.what());
    } catch (const std::out_of_range& e) {
        return fail(PLK_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(PLK_ERR_INTERNAL, e.what());
    }
}

}  // namespace

struct plk_scenario {
    ScenarioConfig config;
    std::string json_text;
    std::string warnings;
};

namespace {

int scenario_from_text(const std::string& text, plk_scenario** out) {
    auto handle = std::make_unique<plk_scenario>();
    handle->config = parse_scenario(text);
    handle->json_text = text;
    for (const auto& w : handle->config.warnings) handle->warnings += w + "\n";
    *out = handle.release();
    return PLK_OK;
}

}  // namespace

struct plk_run {
    RunRecord record;
    RunMetrics metrics;
    std::string metrics_json;
};

struct plk_gain_table {
    GainTable table;
};

extern "C" {

const char* plk_version(void) { return "1.0.0"; }

const char* plk_last_error(void) { return g_last_error.c_str(); }

int plk_scenario_load_file(const char* path, plk_scenario** out) {
    if (!path || !out) return fail(PLK_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) return fail(PLK_ERR_IO, std::string("cannot open file: ") + path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        return scenario_from_text(text, out);
    });
}

int plk_scenario_parse(const char* json_text, plk_scenario** out) {
    if (!json_text || !out) return fail(PLK_ERR_INVALID_ARG, "null argument");
    return guarded([&] { return scenario_from_text(json_text, out); });
}

int plk_scenario_set_seed(plk_scenario* s, long long seed) {
    if (!s) return fail(PLK_ERR_INVALID_ARG, "null scenario");
    return plk_scenario_set_param(s, "noise.seed", static_cast<double>(seed));
}

int plk_scenario_set_cells(plk_scenario* s, int n_cells) {
    if (!s) return fail(PLK_ERR_INVALID_ARG, "null scenario");
    return plk_scenario_set_param(s, "grid.n_cells", static_cast<double>(n_cells));
}

int plk_scenario_set_param(plk_scenario* s, const char* dotted_key, double value) {
    if (!s || !dotted_key) return fail(PLK_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        std::string updated;
        s->config = with_param(s->json_text, dotted_key, value, &updated);
        s->json_text = updated;
        s->warnings.clear();
        for (const auto& w : s->config.warnings) s->warnings += w + "\n";
        return PLK_OK;
    });
}

const char* plk_scenario_warnings(const plk_scenario* s) {
    return s ? s->warnings.c_str() : "";
}

void plk_scenario_free(plk_scenario* s) { delete s; }

int plk_run_scenario(const plk_scenario* s, plk_run** out) {
    if (!s || !out) return fail(PLK_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        auto handle = std::make_unique<plk_run>();
        handle->record = run_scenario(s->config);
        handle->metrics = run_metrics(handle->record, s->config.leak);
        handle->metrics_json = metrics_to_json(handle->metrics);
        *out = handle.release();
        return PLK_OK;
    });
}

int plk_run_length(const plk_run* r, size_t* out_len) {
    if (!r || !out_len) return fail(PLK_ERR_INVALID_ARG, "null argument");
    *out_len = r->record.t.size();
    return PLK_OK;
}

int plk_run_column(const plk_run* r, const char* name, const double** out_data,
                   size_t* out_len) {
    if (!r || !name || !out_data || !out_len)
        return fail(PLK_ERR_INVALID_ARG, "null argument");
    const RunRecord& rec = r->record;
    const std::vector<double>* col = nullptr;
    if (!std::strcmp(name, "t")) col = &rec.t;
    else if (!std::strcmp(name, "q0")) col = &rec.q0;
    else if (!std::strcmp(name, "p0")) col = &rec.p0;
    else if (!std::strcmp(name, "q_l")) col = &rec.q_l;
    else if (!std::strcmp(name, "p_l")) col = &rec.p_l;
    else if (!std::strcmp(name, "y")) col = &rec.y;
    else if (!std::strcmp(name, "y_hat")) col = &rec.y_hat;
    else if (!std::strcmp(name, "chi_hat")) col = &rec.chi_hat;
    else if (!std::strcmp(name, "delta_hat")) col = &rec.delta_hat;
    else return fail(PLK_ERR_INVALID_ARG, std::string("unknown column: ") + name);
    *out_data = col->data();
    *out_len = col->size();
    return PLK_OK;
}

int plk_run_write_timeseries_csv(const plk_run* r, const char* path) {
    if (!r || !path) return fail(PLK_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        write_timeseries_csv(r->record, path);
        return PLK_OK;
    });
}

int plk_run_write_metrics_json(const plk_run* r, const char* path) {
    if (!r || !path) return fail(PLK_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        write_metrics_json(r->metrics, path);
        return PLK_OK;
    });
}

int plk_run_metrics_json(const plk_run* r, const char** out_json) {
    if (!r || !out_json) return fail(PLK_ERR_INVALID_ARG, "null argument");
    *out_json = r->metrics_json.c_str();
    return PLK_OK;
}

void plk_run_free(plk_run* r) { delete r; }

int plk_gain_table_compute(const plk_scenario* s, plk_gain_table** out) {
    if (!s || !out) return fail(PLK_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        auto handle = std::make_unique<plk_gain_table>();
        handle->table = compute_gain_table(s->config);
        *out = handle.release();
        return PLK_OK;
    });
}

int plk_gain_table_rows(const plk_gain_table* g, size_t* out_rows) {
    if (!g || !out_rows) return fail(PLK_ERR_INVALID_ARG, "null argument");
    *out_rows = g->table.profile.x_nodes.size();
    return PLK_OK;
}

int plk_gain_table_column(const plk_gain_table* g, const char* name,
                          const double** out_data, size_t* out_len) {
    if (!g || !name || !out_data || !out_len)
        return fail(PLK_ERR_INVALID_ARG, "null argument");
    const GainProfile& p = g->table.profile;
    const std::vector<double>* col = nullptr;
    if (!std::strcmp(name, "x")) col = &p.x_nodes;
    else if (!std::strcmp(name, "p1")) col = &p.p1;
    else if (!std::strcmp(name, "p2")) col = &p.p2;
    else if (!std::strcmp(name, "p1_scaled")) col = &p.p1_scaled;
    else if (!std::strcmp(name, "p2_scaled")) col = &p.p2_scaled;
    else return fail(PLK_ERR_INVALID_ARG, std::string("unknown column: ") + name);
    *out_data = col->data();
    *out_len = col->size();
    return PLK_OK;
}

int plk_gain_table_write_csv(const plk_gain_table* g, const char* path) {
    if (!g || !path) return fail(PLK_ERR_INVALID_ARG, "null argument");
    return guarded([&] {
        write_gains_csv(g->table, path);
        return PLK_OK;
    });
}

void plk_gain_table_free(plk_gain_table* g) { delete g; }

int plk_validate(plk_check_callback cb, void* user_data, int* out_failed) {
    return guarded([&] {
        const auto results = validation::run_all_checks();
        int failed = 0;
        for (const auto& r : results) {
            if (!r.passed) ++failed;
            if (cb) cb(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user_data);
        }
        if (out_failed) *out_failed = failed;
        return PLK_OK;
    });
}

}  // extern "C"
