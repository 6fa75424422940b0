#include "harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pipeleak {

using nlohmann::json;

DerivedCoefficients PipelineConfig::derive(const LeakSpec& leak) const {
    if (friction_override)
        return derive_coefficients_with_friction(fluid, geom, op, leak, *friction_override);
    return derive_coefficients(fluid, geom, op, leak);
}

void ScenarioConfig::validate() const {
    pipeline.fluid.validate();
    pipeline.geom.validate();
    pipeline.op.validate();
    leak.validate(pipeline.geom);
    adaptation.validate();
    if (n_cells < 16) throw ConfigError("grid.n_cells: must be >= 16");
    if (!(t_end > 0.0)) throw ConfigError("grid.t_end_s: must be > 0");
    if (leak.size > 0.0 && !(t_end > leak.onset_time))
        throw ConfigError("grid.t_end_s: must exceed leak.onset_time_s when a leak is configured");
    if (output.stride < 1) throw ConfigError("output.stride: must be >= 1");
    if (pipeline.op.q_in == 0.0 && !pipeline.friction_override)
        throw ConfigError("pipeline.q_in_m3_s: must be nonzero");
}

namespace {

void require_keys(const json& j, const std::string& ctx,
                  std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) throw ConfigError(ctx + "." + it.key() + ": unknown key");
    }
}

double get_num(const json& j, const std::string& ctx, const char* key, double fallback,
               bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(ctx + "." + key + ": missing required value");
        return fallback;
    }
    if (!j[key].is_number()) throw ConfigError(ctx + "." + key + ": expected a number");
    return j[key].get<double>();
}

bool get_bool(const json& j, const std::string& ctx, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw ConfigError(ctx + "." + key + ": expected a boolean");
    return j[key].get<bool>();
}

ScenarioConfig parse_document(const json& doc) {
    require_keys(doc, "config",
                 {"pipeline", "leak", "noise", "adaptation", "grid", "mode", "output"});
    ScenarioConfig cfg;

    if (!doc.contains("pipeline")) throw ConfigError("config.pipeline: missing section");
    const json& pl = doc["pipeline"];
    require_keys(pl, "pipeline",
                 {"length_m", "diameter_m", "area_m2", "roughness_m", "elevation_drop_m",
                  "bulk_modulus_pa", "density_kg_m3", "viscosity_pa_s", "gravity_m_s2",
                  "q_in_m3_s", "p_out_pa", "friction_factor_override"});
    cfg.pipeline.geom.length = get_num(pl, "pipeline", "length_m", 0.0, true);
    cfg.pipeline.geom.diameter = get_num(pl, "pipeline", "diameter_m", 0.0, true);
    cfg.pipeline.geom.surface_roughness = get_num(pl, "pipeline", "roughness_m", 0.0);
    cfg.pipeline.geom.elevation_drop = get_num(pl, "pipeline", "elevation_drop_m", 0.0);
    const double area_default = PipeGeometry::area_from_diameter(cfg.pipeline.geom.diameter);
    cfg.pipeline.geom.area = get_num(pl, "pipeline", "area_m2", area_default);
    if (std::abs(cfg.pipeline.geom.area - area_default) > 1e-12 * area_default)
        cfg.warnings.push_back("pipeline.area_m2 is inconsistent with pi d^2/4 for the given diameter");
    cfg.pipeline.fluid.bulk_modulus = get_num(pl, "pipeline", "bulk_modulus_pa", 0.0, true);
    cfg.pipeline.fluid.density = get_num(pl, "pipeline", "density_kg_m3", 0.0, true);
    cfg.pipeline.fluid.dynamic_viscosity = get_num(pl, "pipeline", "viscosity_pa_s", 0.0, true);
    cfg.pipeline.fluid.gravity = get_num(pl, "pipeline", "gravity_m_s2", 9.8);
    cfg.pipeline.op.q_in = get_num(pl, "pipeline", "q_in_m3_s", 0.0, true);
    cfg.pipeline.op.p_out = get_num(pl, "pipeline", "p_out_pa", 0.0, true);
    if (pl.contains("friction_factor_override") && !pl["friction_factor_override"].is_null())
        cfg.pipeline.friction_override =
            get_num(pl, "pipeline", "friction_factor_override", 0.0);

    const json empty = json::object();
    const json& lk = doc.contains("leak") ? doc["leak"] : empty;
    require_keys(lk, "leak", {"size_m3_s", "position_m", "onset_time_s", "gamma_d"});
    cfg.leak.size = get_num(lk, "leak", "size_m3_s", 0.0);
    cfg.leak.position = get_num(lk, "leak", "position_m", cfg.pipeline.geom.length / 2.0);
    cfg.leak.onset_time = get_num(lk, "leak", "onset_time_s", 0.0);
    cfg.leak.gamma_d = get_num(lk, "leak", "gamma_d", 0.8);

    const json& nz = doc.contains("noise") ? doc["noise"] : empty;
    require_keys(nz, "noise", {"enabled", "seed", "amplitude_frac", "hold_time_s"});
    cfg.noise.enabled = get_bool(nz, "noise", "enabled", false);
    cfg.noise.seed = static_cast<std::uint64_t>(get_num(nz, "noise", "seed", 0.0));
    cfg.noise.amplitude_frac = get_num(nz, "noise", "amplitude_frac", 0.05);
    cfg.noise.hold_time = get_num(nz, "noise", "hold_time_s", 0.5);
    if (!(cfg.noise.amplitude_frac >= 0.0 && cfg.noise.amplitude_frac <= 0.5))
        throw ConfigError("noise.amplitude_frac: must lie in [0, 0.5]");

    const json& ad = doc.contains("adaptation") ? doc["adaptation"] : empty;
    require_keys(ad, "adaptation",
                 {"L", "gamma", "localization_enabled", "localization_start_delay_s",
                  "chi_detection_threshold_m3_s", "project_chi", "position_estimator"});
    cfg.adaptation.L = get_num(ad, "adaptation", "L", -1.0);
    cfg.adaptation.gamma = get_num(ad, "adaptation", "gamma", 0.2);
    cfg.adaptation.localization_enabled = get_bool(ad, "adaptation", "localization_enabled", true);
    cfg.adaptation.localization_start_delay =
        get_num(ad, "adaptation", "localization_start_delay_s", 5.0);
    cfg.adaptation.chi_detection_threshold =
        get_num(ad, "adaptation", "chi_detection_threshold_m3_s", 0.005);
    cfg.adaptation.project_chi = get_bool(ad, "adaptation", "project_chi", false);
    if (ad.contains("position_estimator")) {
        const std::string v = ad["position_estimator"].get<std::string>();
        if (v == "riemann")
            cfg.adaptation.position_estimator = AdaptationConfig::PositionEstimator::riemann;
        else if (v == "linear")
            cfg.adaptation.position_estimator = AdaptationConfig::PositionEstimator::linear;
        else
            throw ConfigError("adaptation.position_estimator: expected \"riemann\" or \"linear\"");
    }

    const json& gr = doc.contains("grid") ? doc["grid"] : empty;
    require_keys(gr, "grid", {"n_cells", "t_end_s"});
    cfg.n_cells = static_cast<int>(get_num(gr, "grid", "n_cells", 200));
    cfg.t_end = get_num(gr, "grid", "t_end_s", 50.0);

    if (doc.contains("mode")) {
        const std::string m = doc["mode"].get<std::string>();
        if (m == "nonlinear")
            cfg.mode = SimMode::nonlinear;
        else if (m == "linear-validation")
            cfg.mode = SimMode::linear_validation;
        else
            throw ConfigError("config.mode: expected \"nonlinear\" or \"linear-validation\"");
    }

    const json& out = doc.contains("output") ? doc["output"] : empty;
    require_keys(out, "output", {"directory", "stride"});
    if (out.contains("directory")) cfg.output.directory = out["directory"].get<std::string>();
    cfg.output.stride = static_cast<int>(get_num(out, "output", "stride", 10));

    cfg.validate();
    return cfg;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_document(doc);
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

ScenarioConfig with_param(const std::string& json_text, const std::string& dotted_key,
                          double value, std::string* out_json) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    std::string pointer = "/";
    for (char c : dotted_key) pointer += (c == '.') ? '/' : c;
    try {
        doc[json::json_pointer(pointer)] = value;
    } catch (const json::exception&) {
        throw ConfigError("config: cannot set parameter " + dotted_key);
    }
    if (out_json) *out_json = doc.dump(2);
    return parse_document(doc);
}

// ---------------------------------------------------------------------------

LockstepSim::LockstepSim(const ScenarioConfig& config)
    : config_(config),
      coeffs_(config.pipeline.derive(config.leak)),
      grid_(Grid::make(config.n_cells, config.t_end, coeffs_.epsilon)),
      gains_(build_gain_profile(grid_.n_nodes(), coeffs_, config.adaptation.L)),
      monitor_(config.adaptation) {
    config_.validate();
    config_.noise.validate(grid_.dt);

    lin_coeffs_ = linear_coeffs(coeffs_, grid_.n_nodes());
    const double l = coeffs_.geom.length;

    if (config_.mode == SimMode::nonlinear) {
        const PhysicalProfile steady = steady_state(coeffs_.fluid, coeffs_.geom, coeffs_.op,
                                                    grid_.n_nodes());
        plant_.field = to_riemann(steady, coeffs_, LeakState{0.0, config_.leak.position});
    } else {
        plant_.field.u.assign(grid_.n_nodes(), 0.0);
        plant_.field.v.assign(grid_.n_nodes(), 0.0);
    }
    plant_.t = 0.0;
    plant_.leak_active = false;

    observer_.field_hat = plant_.field;
    observer_.chi_hat = 0.0;
    observer_.delta_hat = l / 2.0;
    observer_.t = 0.0;

    refresh_measurements(inlet_signal(0.0, coeffs_.op, config_.noise));
}

bool LockstepSim::localization_active() const {
    return config_.adaptation.localization_enabled && monitor_.localization_active(t_);
}

double LockstepSim::output_y() const {
    return plant_.field.u[grid_.n_cells];
}

double LockstepSim::output_y_hat() const {
    return observer_.field_hat.u[grid_.n_cells];
}

void LockstepSim::refresh_measurements(double q0_applied) {
    const double chi_act = plant_.leak_active ? config_.leak.size : 0.0;
    const LeakState truth{chi_act, config_.leak.position};
    if (config_.mode == SimMode::nonlinear) {
        meas_.q0 = q0_applied;
        meas_.p0 = inlet_pressure_from_field(plant_.field, coeffs_, truth);
        const OutletSignals out = outlet_from_field(plant_.field, coeffs_);
        meas_.q_l = out.q_l;
        meas_.p_l = out.p_l;
    } else {
        const RiemannField uv = delta_to_riemann(plant_.field, coeffs_, truth);
        meas_.q0 = q0_applied;
        meas_.p0 = inlet_pressure_from_field(uv, coeffs_, truth);
        const OutletSignals out = outlet_from_field(uv, coeffs_);
        meas_.q_l = out.q_l;
        meas_.p_l = out.p_l;
        lmeas_.dy = plant_.field.u[grid_.n_cells];
        lmeas_.dq0 = q0_applied - coeffs_.op.q_in;
        lmeas_.U = 0.0;
        lmeas_.p0 = meas_.p0;
    }
}

void LockstepSim::step() {
    const double t_next = (step_index_ + 1) * grid_.dt;
    const bool leak_configured = config_.leak.size > 0.0;

    if (leak_configured && !plant_.leak_active && t_next >= config_.leak.onset_time) {
        if (config_.mode == SimMode::nonlinear) {
            plant_ = activate_leak(plant_, config_.leak, coeffs_);
        } else {
            // Same continuity re-projection, expressed through the offset pair.
            const RiemannField uv =
                delta_to_riemann(plant_.field, coeffs_, LeakState{0.0, config_.leak.position});
            plant_.field = riemann_to_delta(uv, coeffs_,
                                            LeakState{config_.leak.size, config_.leak.position});
            plant_.leak_active = true;
        }
    }

    const double q0_next = inlet_signal(t_next, coeffs_.op, config_.noise);
    const bool adapt_delta = localization_active();

    if (config_.mode == SimMode::nonlinear) {
        const Measurements meas_old = meas_;
        plant_ = plant_step(plant_, q0_next, coeffs_.op.p_out, config_.leak, coeffs_, grid_);
        refresh_measurements(q0_next);
        observer_ = nonlinear_observer_step(observer_, meas_old, meas_, gains_,
                                            config_.adaptation, coeffs_, grid_,
                                            /*adapt_chi=*/true, adapt_delta);
    } else {
        const LinearMeasurements lmeas_old = lmeas_;
        const double chi_act = plant_.leak_active ? config_.leak.size : 0.0;
        plant_ = linear_plant_step(plant_, {q0_next - coeffs_.op.q_in, 0.0}, lin_coeffs_,
                                   chi_act, grid_, coeffs_.op.q_in);
        refresh_measurements(q0_next);
        observer_ = linear_observer_step(observer_, lmeas_old, lmeas_, gains_,
                                         config_.adaptation, lin_coeffs_, coeffs_, grid_,
                                         /*adapt_chi=*/true, adapt_delta);
    }

    ++step_index_;
    t_ = t_next;
    monitor_.update(t_, observer_.chi_hat);
    if (localization_start_ < 0.0 && localization_active()) localization_start_ = t_;
}

void LockstepSim::run_to_end() {
    while (step_index_ < grid_.n_steps) step();
}

RunRecord run_scenario(const ScenarioConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    LockstepSim sim(config);
    RunRecord rec;

    const auto sample = [&]() {
        const Measurements m = sim.measurements();
        rec.t.push_back(sim.t());
        rec.q0.push_back(m.q0);
        rec.p0.push_back(m.p0);
        rec.q_l.push_back(m.q_l);
        rec.p_l.push_back(m.p_l);
        rec.y.push_back(sim.output_y());
        rec.y_hat.push_back(sim.output_y_hat());
        rec.chi_hat.push_back(sim.observer().chi_hat);
        rec.delta_hat.push_back(sim.observer().delta_hat);
    };

    sample();
    while (sim.step_index() < sim.grid().n_steps) {
        sim.step();
        if (sim.step_index() % config.output.stride == 0 ||
            sim.step_index() == sim.grid().n_steps)
            sample();
    }

    rec.detection = sim.detection().event();
    rec.localization_start = sim.localization_start();
    rec.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

// ---------------------------------------------------------------------------

DecayFit fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& e,
                               double t_lo, double t_hi, double floor_value) {
    DecayFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi) continue;
        const double mag = std::abs(e[i]);
        if (mag <= floor_value) continue;
        const double ly = std::log(mag);
        sx += t[i];
        sy += ly;
        sxx += t[i] * t[i];
        sxy += t[i] * ly;
        syy += ly * ly;
        ++n;
    }
    fit.n_points = n;
    if (n < 3) return fit;
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return fit;
    const double slope = (n * sxy - sx * sy) / den;
    fit.rate = -slope;
    const double ss_tot = syy - sy * sy / n;
    const double ss_res = ss_tot - slope * (sxy - sx * sy / n);
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

namespace {

// First time after which the series stays inside the band around the target.
double settle_time(const std::vector<double>& t, const std::vector<double>& series,
                   double target, double band) {
    int last_outside = -1;
    for (size_t i = 0; i < series.size(); ++i)
        if (std::abs(series[i] - target) > band) last_outside = static_cast<int>(i);
    if (last_outside < 0) return t.empty() ? -1.0 : t.front();
    if (last_outside + 1 >= static_cast<int>(t.size())) return -1.0;
    return t[last_outside + 1];
}

}  // namespace

RunMetrics run_metrics(const RunRecord& record, const LeakSpec& truth) {
    RunMetrics m;
    m.runtime_seconds = record.runtime_seconds;
    if (record.t.empty()) return m;

    m.chi_final = record.chi_hat.back();
    m.delta_final = record.delta_hat.back();
    m.chi_final_error = std::abs(m.chi_final - truth.size);
    m.delta_final_error = std::abs(m.delta_final - truth.position);

    if (truth.size > 0.0) {
        m.chi_settle_time = settle_time(record.t, record.chi_hat, truth.size, 0.1 * truth.size);
        m.delta_settle_time =
            settle_time(record.t, record.delta_hat, truth.position, 0.1 * truth.position);
    }

    if (record.detection) {
        m.detection_time = record.detection->time;
        m.detection_latency = record.detection->time - truth.onset_time;
    }

    // Exponential fit of the output error over the decay window after onset.
    std::vector<double> err(record.t.size());
    for (size_t i = 0; i < err.size(); ++i) err[i] = record.y[i] - record.y_hat[i];
    double peak = 0.0, peak_t = truth.onset_time;
    for (size_t i = 0; i < err.size(); ++i) {
        if (record.t[i] < truth.onset_time) continue;
        if (std::abs(err[i]) > peak) { peak = std::abs(err[i]); peak_t = record.t[i]; }
    }
    if (peak > 0.0) {
        const DecayFit fit = fit_exponential_decay(record.t, err, peak_t, record.t.back(),
                                                   std::max(1e-12, 1e-5 * peak));
        m.error_decay_rate = fit.rate;
        m.error_decay_r2 = fit.r2;
    }
    return m;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_timeseries_csv(const RunRecord& record, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,q0,p0,q_l,p_l,y,y_hat,chi_hat,delta_hat\n";
    for (size_t i = 0; i < record.t.size(); ++i) {
        out << fmt_double(record.t[i]) << ',' << fmt_double(record.q0[i]) << ','
            << fmt_double(record.p0[i]) << ',' << fmt_double(record.q_l[i]) << ','
            << fmt_double(record.p_l[i]) << ',' << fmt_double(record.y[i]) << ','
            << fmt_double(record.y_hat[i]) << ',' << fmt_double(record.chi_hat[i]) << ','
            << fmt_double(record.delta_hat[i]) << '\n';
    }
}

std::string metrics_to_json(const RunMetrics& m) {
    json j;
    j["chi_final"] = m.chi_final;
    j["delta_final"] = m.delta_final;
    j["chi_final_error"] = m.chi_final_error;
    j["delta_final_error"] = m.delta_final_error;
    j["chi_settle_time_s"] = m.chi_settle_time;
    j["delta_settle_time_s"] = m.delta_settle_time;
    j["detection_time_s"] = m.detection_time;
    j["detection_latency_s"] = m.detection_latency;
    j["error_decay_rate"] = m.error_decay_rate;
    j["error_decay_r2"] = m.error_decay_r2;
    j["runtime_seconds"] = m.runtime_seconds;
    return j.dump(2) + "\n";
}

void write_metrics_json(const RunMetrics& metrics, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << metrics_to_json(metrics);
}

GainTable compute_gain_table(const ScenarioConfig& config) {
    const DerivedCoefficients coeffs = config.pipeline.derive(config.leak);
    GainTable table;
    table.profile = build_gain_profile(config.n_cells + 1, coeffs, config.adaptation.L);
    return table;
}

std::string gains_to_csv(const GainTable& table) {
    std::ostringstream out;
    out << "x,p1,p2,p1_scaled,p2_scaled\n";
    const GainProfile& g = table.profile;
    for (size_t i = 0; i < g.x_nodes.size(); ++i) {
        out << fmt_double(g.x_nodes[i]) << ',' << fmt_double(g.p1[i]) << ','
            << fmt_double(g.p2[i]) << ',' << fmt_double(g.p1_scaled[i]) << ','
            << fmt_double(g.p2_scaled[i]) << '\n';
    }
    return out.str();
}

void write_gains_csv(const GainTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << gains_to_csv(table);
}

}  // namespace pipeleak
