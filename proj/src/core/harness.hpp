#ifndef PIPELEAK_CORE_HARNESS_HPP
#define PIPELEAK_CORE_HARNESS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "observer.hpp"

namespace pipeleak {

/// Raised on malformed or inconsistent configuration input. what() names the
/// offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    FluidProperties fluid{};
    PipeGeometry geom{};
    OperatingPoint op{};
    // Pins the Darcy factor instead of evaluating the turbulent correlation;
    // used by frictionless validation setups.
    std::optional<double> friction_override;

    DerivedCoefficients derive(const LeakSpec& leak) const;
};

enum class SimMode { nonlinear, linear_validation };

struct OutputConfig {
    std::string directory = "out";
    int stride = 10;
};

struct ScenarioConfig {
    PipelineConfig pipeline{};
    LeakSpec leak{};
    NoiseSpec noise{};
    AdaptationConfig adaptation{};
    int n_cells = 200;
    double t_end = 50.0;
    SimMode mode = SimMode::nonlinear;
    OutputConfig output{};
    std::vector<std::string> warnings;

    void validate() const;
};

/// Parse a scenario from JSON text. Unknown keys are rejected with the full
/// field path in the error message.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);
/// Apply `dotted.key = value` onto the JSON document and re-parse.
ScenarioConfig with_param(const std::string& json_text, const std::string& dotted_key,
                          double value, std::string* out_json = nullptr);

/// Time series and summary data of one closed-loop run.
struct RunRecord {
    std::vector<double> t;
    std::vector<double> q0, p0, q_l, p_l;
    std::vector<double> y, y_hat;
    std::vector<double> chi_hat, delta_hat;
    std::optional<DetectionEvent> detection;
    double localization_start = -1.0;  // s, < 0 when localization never engaged
    double runtime_seconds = 0.0;
};

/// Convergence and detection metrics extracted from a run.
struct RunMetrics {
    double chi_final = 0.0;
    double delta_final = 0.0;
    double chi_final_error = 0.0;
    double delta_final_error = 0.0;
    double chi_settle_time = -1.0;    // s into the run; < 0 when never settled
    double delta_settle_time = -1.0;  // s
    double detection_time = -1.0;     // s
    double detection_latency = -1.0;  // s after leak onset
    double error_decay_rate = 0.0;    // 1/s from the log-linear fit
    double error_decay_r2 = 0.0;
    double runtime_seconds = 0.0;
};

/// Plant and observer advanced in lockstep: the plant moves first, the new
/// measurements are extracted, then the observer consumes them. Detection and
/// localization gating run at the full step rate.
class LockstepSim {
public:
    explicit LockstepSim(const ScenarioConfig& config);

    void step();
    void run_to_end();

    double t() const { return t_; }
    int step_index() const { return step_index_; }
    const Grid& grid() const { return grid_; }
    const DerivedCoefficients& coeffs() const { return coeffs_; }
    const GainProfile& gains() const { return gains_; }
    const ScenarioConfig& config() const { return config_; }

    const PlantState& plant() const { return plant_; }
    const ObserverState& observer() const { return observer_; }
    const DetectionMonitor& detection() const { return monitor_; }
    bool localization_active() const;
    double localization_start() const { return localization_start_; }

    /// Physical-coordinate measurements at the current time (synthesized from
    /// the transform in linear mode).
    Measurements measurements() const { return meas_; }
    double output_y() const;
    double output_y_hat() const;

private:
    void refresh_measurements(double q0_applied);

    ScenarioConfig config_;
    DerivedCoefficients coeffs_;
    Grid grid_;
    GainProfile gains_;
    LinearPlantCoeffs lin_coeffs_;
    PlantState plant_;
    ObserverState observer_;
    DetectionMonitor monitor_;
    Measurements meas_{};
    LinearMeasurements lmeas_{};
    double t_ = 0.0;
    int step_index_ = 0;
    double localization_start_ = -1.0;
};

/// Run a scenario end to end, sampling the record at the configured stride.
RunRecord run_scenario(const ScenarioConfig& config);

RunMetrics run_metrics(const RunRecord& record, const LeakSpec& truth);

/// Least-squares fit of log|e| against t over [t_lo, t_hi], ignoring samples
/// below the floor. Returns {rate, r2, n_points}.
struct DecayFit {
    double rate = 0.0;
    double r2 = 0.0;
    int n_points = 0;
};
DecayFit fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& e,
                               double t_lo, double t_hi, double floor_value);

void write_timeseries_csv(const RunRecord& record, const std::string& path);
void write_metrics_json(const RunMetrics& metrics, const std::string& path);
std::string metrics_to_json(const RunMetrics& metrics);

/// Gain table for CSV export.
struct GainTable {
    GainProfile profile;
};
GainTable compute_gain_table(const ScenarioConfig& config);
void write_gains_csv(const GainTable& table, const std::string& path);
std::string gains_to_csv(const GainTable& table);

}  // namespace pipeleak

#endif
