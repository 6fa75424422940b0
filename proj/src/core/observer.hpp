#ifndef PIPELEAK_CORE_OBSERVER_HPP
#define PIPELEAK_CORE_OBSERVER_HPP

#include <optional>
#include <vector>

#include "kernels.hpp"
#include "simcore.hpp"

namespace pipeleak {

/// Boundary measurements available to the observer at one sampling instant.
struct Measurements {
    double q0 = 0.0;   // m^3/s, inlet flow
    double p0 = 0.0;   // Pa, inlet pressure
    double q_l = 0.0;  // m^3/s, outlet flow
    double p_l = 0.0;  // Pa, outlet pressure
};

/// Adaptation gains and the detection/localization protocol.
struct AdaptationConfig {
    double L = -1.0;                       // 1/s, output-injection gain, < 0
    double gamma = 0.2;                    // localization gain, > 0
    bool localization_enabled = true;
    double localization_start_delay = 5.0;  // s after detection
    double chi_detection_threshold = 0.005; // m^3/s
    bool project_chi = false;               // clamp chi_hat rate to [0, q_in]
    // Inlet-pressure estimate variant for the localization update: the
    // characteristic-coordinate form omits the p_out and (F/A) delta chi
    // terms that the linear-regime estimator carries.
    enum class PositionEstimator { riemann, linear } position_estimator =
        PositionEstimator::riemann;

    void validate() const;
};

/// Observer state: estimated characteristic field plus the two parameter
/// estimates. delta_hat stays inside [0, l] at all times.
struct ObserverState {
    RiemannField field_hat;
    double chi_hat = 0.0;    // m^3/s
    double delta_hat = 0.0;  // m
    double t = 0.0;          // s
};

/// Projected adaptation rate: passes rate through except at the interval
/// boundary, where outward-pointing rates are zeroed.
double proj_interval(double value, double rate, double lo, double hi);

/// Inlet-pressure estimate from the observer's characteristic state.
/// The linear variant adds the p_out and (F/A) delta_hat chi_hat terms.
double estimate_inlet_pressure(const ObserverState& obs, const DerivedCoefficients& coeffs,
                               AdaptationConfig::PositionEstimator variant);

/// One step of the adaptive observer running in characteristic coordinates
/// against the nonlinear plant. meas_old drives the output error and the
/// adaptation laws; meas_new supplies the boundary values at the new time.
/// adapt_chi / adapt_delta freeze the respective update laws when false
/// (localization stays frozen until the detection protocol enables it).
ObserverState nonlinear_observer_step(const ObserverState& obs,
                                      const Measurements& meas_old,
                                      const Measurements& meas_new,
                                      const GainProfile& gains,
                                      const AdaptationConfig& config,
                                      const DerivedCoefficients& coeffs,
                                      const Grid& grid,
                                      bool adapt_chi, bool adapt_delta);

/// Measurements of the linear validation system.
struct LinearMeasurements {
    double dy = 0.0;   // m^3/s, output du(1)
    double dq0 = 0.0;  // m^3/s, q0 - q_in
    double U = 0.0;    // m^3/s, boundary input at x = 1
    double p0 = 0.0;   // Pa, synthesized physical inlet pressure
};

/// One step of the adaptive observer in delta coordinates (linear mode).
ObserverState linear_observer_step(const ObserverState& obs,
                                   const LinearMeasurements& meas_old,
                                   const LinearMeasurements& meas_new,
                                   const GainProfile& gains,
                                   const AdaptationConfig& config,
                                   const LinearPlantCoeffs& lc,
                                   const DerivedCoefficients& coeffs,
                                   const Grid& grid,
                                   bool adapt_chi, bool adapt_delta);

/// One step of the linear observer expressed in (u, v) coordinates with the
/// scaled gains. Exactly conjugate to linear_observer_step through the
/// exponential coordinate change: the transport stage carries the factor
/// exp(sigma dt) on the mean-removed state that the delta coordinates absorb.
/// Exact while delta_hat = 0 (static transform offsets).
ObserverState linear_observer_uv_step(const ObserverState& obs,
                                      double y_old, const Measurements& meas_new,
                                      const GainProfile& gains,
                                      const AdaptationConfig& config,
                                      const DerivedCoefficients& coeffs,
                                      const Grid& grid,
                                      bool adapt_chi);

/// Leak detection event.
struct DetectionEvent {
    double time = 0.0;  // s
    double size = 0.0;  // m^3/s, chi_hat when declared
};

/// Declares a leak once chi_hat stays above the threshold for one full second
/// of simulated time. Localization starts localization_start_delay later.
class DetectionMonitor {
public:
    explicit DetectionMonitor(const AdaptationConfig& config)
        : threshold_(config.chi_detection_threshold),
          delay_(config.localization_start_delay) {}

    void update(double t, double chi_hat);
    bool detected() const { return event_.has_value(); }
    const std::optional<DetectionEvent>& event() const { return event_; }
    bool localization_active(double t) const {
        return event_ && t >= event_->time + delay_;
    }

private:
    double threshold_;
    double delay_;
    double streak_start_ = -1.0;
    std::optional<DetectionEvent> event_;
};

/// Batch form of the detection rule over a recorded series.
std::optional<DetectionEvent> detect_from_series(const std::vector<double>& t,
                                                 const std::vector<double>& chi_hat,
                                                 const AdaptationConfig& config);

}  // namespace pipeleak

#endif
