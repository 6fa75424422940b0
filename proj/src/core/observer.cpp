#include "observer.hpp"

#include <algorithm>
#include <cmath>

namespace pipeleak {

void AdaptationConfig::validate() const {
    if (!(L < 0.0)) throw std::invalid_argument("adaptation.L must be < 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("adaptation.gamma must be > 0");
    if (!(localization_start_delay >= 0.0))
        throw std::invalid_argument("adaptation.localization_start_delay must be >= 0");
    if (!(chi_detection_threshold >= 0.0))
        throw std::invalid_argument("adaptation.chi_detection_threshold must be >= 0");
}

double proj_interval(double value, double rate, double lo, double hi) {
    if (value <= lo && rate < 0.0) return 0.0;
    if (value >= hi && rate > 0.0) return 0.0;
    return rate;
}

double estimate_inlet_pressure(const ObserverState& obs, const DerivedCoefficients& coeffs,
                               AdaptationConfig::PositionEstimator variant) {
    const double area = coeffs.geom.area;
    double p = coeffs.sqrt_beta_rho() / area * (obs.field_hat.u[0] - obs.field_hat.v[0]) +
               coeffs.fluid.density / (area * area) * coeffs.eta * obs.chi_hat;
    if (variant == AdaptationConfig::PositionEstimator::linear)
        p += coeffs.op.p_out + coeffs.big_f / area * obs.delta_hat * obs.chi_hat;
    return p;
}

namespace {

double chi_rate(double chi_hat, double raw_rate, const AdaptationConfig& config,
                const DerivedCoefficients& coeffs) {
    if (!config.project_chi) return raw_rate;
    return proj_interval(chi_hat, raw_rate, 0.0, std::abs(coeffs.op.q_in));
}

double advance_delta_hat(double delta_hat, double p0_meas, double p0_est,
                         const AdaptationConfig& config, double length, double dt) {
    const double rate = proj_interval(delta_hat, config.gamma * (p0_meas - p0_est), 0.0, length);
    // Euler overshoot past the interval ends is clamped; the projection only
    // gates rates evaluated at the boundary itself.
    return std::clamp(delta_hat + dt * rate, 0.0, length);
}

}  // namespace

ObserverState nonlinear_observer_step(const ObserverState& obs,
                                      const Measurements& meas_old,
                                      const Measurements& meas_new,
                                      const GainProfile& gains,
                                      const AdaptationConfig& config,
                                      const DerivedCoefficients& coeffs,
                                      const Grid& grid,
                                      bool adapt_chi, bool adapt_delta) {
    const int n = grid.n_cells;
    const double dt = grid.dt;
    const double l = coeffs.geom.length;
    const double c_f = coeffs.friction_source_coeff();
    const double err = measurement_y(meas_old.p_l, meas_old.q_l, coeffs) - obs.field_hat.u[n];

    ObserverState next;
    next.t = obs.t + dt;

    next.chi_hat = obs.chi_hat;
    if (adapt_chi) {
        const double raw = config.L * std::exp(coeffs.alpha()) * err;
        next.chi_hat += dt * chi_rate(obs.chi_hat, raw, config, coeffs);
    }

    next.delta_hat = obs.delta_hat;
    if (adapt_delta) {
        const double p0_est = estimate_inlet_pressure(obs, coeffs, config.position_estimator);
        next.delta_hat =
            advance_delta_hat(obs.delta_hat, meas_old.p0, p0_est, config, l, dt);
    }

    auto& u = next.field_hat.u;
    auto& v = next.field_hat.v;
    u.resize(n + 1);
    v.resize(n + 1);
    for (int i = 1; i <= n; ++i) u[i] = obs.field_hat.u[i - 1];
    for (int i = 0; i < n; ++i) v[i] = obs.field_hat.v[i + 1];
    // Pre-source boundary values mirror the plant: the outlet value follows
    // from the measured pressure, the inlet one from the measured flow.
    v[n] = u[n] - coeffs.geom.area / coeffs.sqrt_beta_rho() * (meas_new.p_l + coeffs.rho_g_h());
    u[0] = -v[0] + meas_new.q0 - next.chi_hat;

    const double chi = next.chi_hat;
    const double dhat = next.delta_hat;
    for (int i = 0; i <= n; ++i) {
        const double dp = leak_delta_prime(grid.x_of(i) * l, dhat);
        const double w = u[i] + v[i] - dp * chi;
        const double k1 = -c_f * std::abs(w) * w;
        const double inj_u = gains.p1_scaled[i] * err;
        const double inj_v = gains.p2_scaled[i] * err;
        const double um = u[i] + 0.5 * dt * (k1 + inj_u);
        const double vm = v[i] + 0.5 * dt * (k1 + inj_v);
        const double wm = um + vm - dp * chi;
        const double k2 = -c_f * std::abs(wm) * wm;
        u[i] += dt * (k2 + inj_u);
        v[i] += dt * (k2 + inj_v);
    }

    u[0] = -v[0] + meas_new.q0 - next.chi_hat;
    v[n] = boundary_v1(meas_new.p_l, meas_new.q_l, coeffs);

    detail::check_divergence(next.field_hat, next.t, coeffs.op.q_in);
    return next;
}

ObserverState linear_observer_step(const ObserverState& obs,
                                   const LinearMeasurements& meas_old,
                                   const LinearMeasurements& meas_new,
                                   const GainProfile& gains,
                                   const AdaptationConfig& config,
                                   const LinearPlantCoeffs& lc,
                                   const DerivedCoefficients& coeffs,
                                   const Grid& grid,
                                   bool adapt_chi, bool adapt_delta) {
    const int n = grid.n_cells;
    const double dt = grid.dt;
    const double err = meas_old.dy - obs.field_hat.u[n];

    ObserverState next;
    next.t = obs.t + dt;

    next.chi_hat = obs.chi_hat;
    if (adapt_chi)
        next.chi_hat += dt * chi_rate(obs.chi_hat, config.L * err, config, coeffs);

    next.delta_hat = obs.delta_hat;
    if (adapt_delta) {
        // Reconstruct the characteristic-coordinate boundary difference from
        // the mean split before applying the linear-regime pressure estimate.
        ObserverState uv_view = obs;
        uv_view.field_hat.u[0] = mean_u(coeffs) + obs.field_hat.u[0];
        uv_view.field_hat.v[0] = mean_v(coeffs) + obs.field_hat.v[0];
        const double p0_est =
            estimate_inlet_pressure(uv_view, coeffs, AdaptationConfig::PositionEstimator::linear);
        next.delta_hat = advance_delta_hat(obs.delta_hat, meas_old.p0, p0_est, config,
                                           coeffs.geom.length, dt);
    }

    auto& u = next.field_hat.u;
    auto& v = next.field_hat.v;
    u.resize(n + 1);
    v.resize(n + 1);
    for (int i = 1; i <= n; ++i) u[i] = obs.field_hat.u[i - 1];
    for (int i = 0; i < n; ++i) v[i] = obs.field_hat.v[i + 1];
    v[n] = meas_new.U;
    u[0] = -v[0] + meas_new.dq0 - next.chi_hat;

    for (int i = 0; i <= n; ++i) {
        const double k1u = lc.c1[i] * v[i] + gains.p1[i] * err;
        const double k1v = lc.c2[i] * u[i] + gains.p2[i] * err;
        const double um = u[i] + 0.5 * dt * k1u;
        const double vm = v[i] + 0.5 * dt * k1v;
        u[i] += dt * (lc.c1[i] * vm + gains.p1[i] * err);
        v[i] += dt * (lc.c2[i] * um + gains.p2[i] * err);
    }

    u[0] = -v[0] + meas_new.dq0 - next.chi_hat;
    v[n] = meas_new.U;

    detail::check_divergence(next.field_hat, next.t, coeffs.op.q_in);
    return next;
}

ObserverState linear_observer_uv_step(const ObserverState& obs,
                                      double y_old, const Measurements& meas_new,
                                      const GainProfile& gains,
                                      const AdaptationConfig& config,
                                      const DerivedCoefficients& coeffs,
                                      const Grid& grid,
                                      bool adapt_chi) {
    const int n = grid.n_cells;
    const double dt = grid.dt;
    const double sigma = coeffs.sigma;
    const double ub = mean_u(coeffs);
    const double vb = mean_v(coeffs);
    const double err = y_old - obs.field_hat.u[n];
    const double decay = std::exp(sigma * dt);
    const LeakState offsets{obs.chi_hat, obs.delta_hat};

    ObserverState next;
    next.t = obs.t + dt;
    next.delta_hat = obs.delta_hat;
    next.chi_hat = obs.chi_hat;
    if (adapt_chi) {
        const double raw = config.L * std::exp(coeffs.alpha()) * err;
        next.chi_hat += dt * chi_rate(obs.chi_hat, raw, config, coeffs);
    }

    std::vector<double> off(n + 1);
    for (int i = 0; i <= n; ++i) off[i] = delta_offset(grid.x_of(i), coeffs, offsets);

    auto& u = next.field_hat.u;
    auto& v = next.field_hat.v;
    u.resize(n + 1);
    v.resize(n + 1);
    for (int i = 1; i <= n; ++i)
        u[i] = ub + off[i] + (obs.field_hat.u[i - 1] - ub - off[i - 1]) * decay;
    for (int i = 0; i < n; ++i)
        v[i] = vb - off[i] + (obs.field_hat.v[i + 1] - vb + off[i + 1]) * decay;
    v[n] = boundary_v1(meas_new.p_l, meas_new.q_l, coeffs);
    u[0] = -v[0] + meas_new.q0 - next.chi_hat;

    for (int i = 0; i <= n; ++i) {
        const double k1u = sigma * (v[i] - vb + off[i]) + gains.p1_scaled[i] * err;
        const double k1v = sigma * (u[i] - ub - off[i]) + gains.p2_scaled[i] * err;
        const double um = u[i] + 0.5 * dt * k1u;
        const double vm = v[i] + 0.5 * dt * k1v;
        u[i] += dt * (sigma * (vm - vb + off[i]) + gains.p1_scaled[i] * err);
        v[i] += dt * (sigma * (um - ub - off[i]) + gains.p2_scaled[i] * err);
    }

    u[0] = -v[0] + meas_new.q0 - next.chi_hat;
    v[n] = boundary_v1(meas_new.p_l, meas_new.q_l, coeffs);

    detail::check_divergence(next.field_hat, next.t, coeffs.op.q_in);
    return next;
}

void DetectionMonitor::update(double t, double chi_hat) {
    if (event_) return;
    if (chi_hat > threshold_) {
        if (streak_start_ < 0.0) streak_start_ = t;
        if (t - streak_start_ >= 1.0) event_ = DetectionEvent{t, chi_hat};
    } else {
        streak_start_ = -1.0;
    }
}

std::optional<DetectionEvent> detect_from_series(const std::vector<double>& t,
                                                 const std::vector<double>& chi_hat,
                                                 const AdaptationConfig& config) {
    DetectionMonitor monitor(config);
    for (size_t i = 0; i < t.size() && i < chi_hat.size(); ++i) {
        monitor.update(t[i], chi_hat[i]);
        if (monitor.detected()) break;
    }
    return monitor.event();
}

}  // namespace pipeleak
