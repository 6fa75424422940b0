#include "riemann.hpp"

#include <cmath>
#include <stdexcept>

namespace pipeleak {

static void check_aligned(size_t a, size_t b) {
    if (a != b || a < 2)
        throw std::invalid_argument("riemann: profile arrays must share a grid of >= 2 nodes");
}

RiemannField to_riemann(const PhysicalProfile& phys,
                        const DerivedCoefficients& coeffs,
                        const LeakState& leak) {
    check_aligned(phys.p.size(), phys.q.size());
    const int n = static_cast<int>(phys.p.size());
    const double l = coeffs.geom.length;
    const double area = coeffs.geom.area;
    const double sbr = coeffs.sqrt_beta_rho();
    const double rho = coeffs.fluid.density;
    const double grav = coeffs.fluid.gravity;
    const double sinphi = coeffs.geom.sin_phi();

    RiemannField f;
    f.u.resize(n);
    f.v.resize(n);
    for (int i = 0; i < n; ++i) {
        const double z = l * i / (n - 1);
        const double dp = leak_delta_prime(z, leak.z_star);
        const double gauge = phys.p[i] + rho * grav * sinphi * z +
                             rho / (area * area) * coeffs.eta * dp * leak.chi;
        const double sym = phys.q[i] + dp * leak.chi;
        f.u[i] = 0.5 * (sym + area / sbr * gauge);
        f.v[i] = 0.5 * (sym - area / sbr * gauge);
    }
    return f;
}

PhysicalProfile from_riemann(const RiemannField& field,
                             const DerivedCoefficients& coeffs,
                             const LeakState& leak) {
    check_aligned(field.u.size(), field.v.size());
    const int n = field.grid_n();
    const double l = coeffs.geom.length;
    const double area = coeffs.geom.area;
    const double sbr = coeffs.sqrt_beta_rho();
    const double rho = coeffs.fluid.density;
    const double grav = coeffs.fluid.gravity;
    const double sinphi = coeffs.geom.sin_phi();

    PhysicalProfile phys;
    phys.p.resize(n);
    phys.q.resize(n);
    for (int i = 0; i < n; ++i) {
        const double z = l * i / (n - 1);
        const double dp = leak_delta_prime(z, leak.z_star);
        phys.q[i] = field.u[i] + field.v[i] - dp * leak.chi;
        phys.p[i] = sbr / area * (field.u[i] - field.v[i]) - rho * grav * sinphi * z -
                    rho / (area * area) * coeffs.eta * dp * leak.chi;
    }
    return phys;
}

double measurement_y(double p_l, double q_l, const DerivedCoefficients& coeffs) {
    return 0.5 * (q_l + coeffs.geom.area / coeffs.sqrt_beta_rho() * (p_l + coeffs.rho_g_h()));
}

double boundary_v1(double p_l, double q_l, const DerivedCoefficients& coeffs) {
    return 0.5 * (q_l - coeffs.geom.area / coeffs.sqrt_beta_rho() * (p_l + coeffs.rho_g_h()));
}

double boundary_input_U(double p_l, double q_l, const DerivedCoefficients& coeffs) {
    const double sbr = coeffs.sqrt_beta_rho();
    const double area = coeffs.geom.area;
    const double friction_head = coeffs.big_f * coeffs.geom.length * coeffs.op.q_in / area;
    return 0.5 * std::exp(-coeffs.alpha()) *
           (q_l - coeffs.op.q_in -
            area / sbr * (p_l - coeffs.op.p_out + coeffs.rho_g_h() + friction_head));
}

double mean_v(const DerivedCoefficients& coeffs) {
    return 0.5 * coeffs.op.q_in * (1.0 + 2.0 * coeffs.alpha());
}

double mean_u(const DerivedCoefficients& coeffs) {
    return coeffs.op.q_in - mean_v(coeffs);
}

double delta_offset(double x, const DerivedCoefficients& coeffs, const LeakState& leak) {
    const double area = coeffs.geom.area;
    const double z = x * coeffs.geom.length;
    const double delta = std::max(z, leak.z_star) - z;
    return area / (2.0 * coeffs.sqrt_beta_rho()) *
           (coeffs.op.p_out + coeffs.big_f / area * delta * leak.chi);
}

RiemannField riemann_to_delta(const RiemannField& field,
                              const DerivedCoefficients& coeffs,
                              const LeakState& leak) {
    check_aligned(field.u.size(), field.v.size());
    const int n = field.grid_n();
    const double a = coeffs.alpha();
    const double ub = mean_u(coeffs);
    const double vb = mean_v(coeffs);
    RiemannField d;
    d.u.resize(n);
    d.v.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        const double off = delta_offset(x, coeffs, leak);
        d.u[i] = (field.u[i] - ub - off) * std::exp(a * x);
        d.v[i] = (field.v[i] - vb + off) * std::exp(-a * x);
    }
    return d;
}

RiemannField delta_to_riemann(const RiemannField& delta,
                              const DerivedCoefficients& coeffs,
                              const LeakState& leak) {
    check_aligned(delta.u.size(), delta.v.size());
    const int n = delta.grid_n();
    const double a = coeffs.alpha();
    const double ub = mean_u(coeffs);
    const double vb = mean_v(coeffs);
    RiemannField f;
    f.u.resize(n);
    f.v.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        const double off = delta_offset(x, coeffs, leak);
        f.u[i] = ub + delta.u[i] * std::exp(-a * x) + off;
        f.v[i] = vb + delta.v[i] * std::exp(a * x) - off;
    }
    return f;
}

double inlet_pressure_from_field(const RiemannField& field,
                                 const DerivedCoefficients& coeffs,
                                 const LeakState& leak) {
    const double area = coeffs.geom.area;
    const double dp = leak_delta_prime(0.0, leak.z_star);
    return coeffs.sqrt_beta_rho() / area * (field.u[0] - field.v[0]) -
           coeffs.fluid.density / (area * area) * coeffs.eta * dp * leak.chi;
}

OutletSignals outlet_from_field(const RiemannField& field, const DerivedCoefficients& coeffs) {
    const int n = field.grid_n();
    OutletSignals out;
    // The leak potential and its derivative vanish at the outlet.
    out.q_l = field.u[n - 1] + field.v[n - 1];
    out.p_l = coeffs.sqrt_beta_rho() / coeffs.geom.area * (field.u[n - 1] - field.v[n - 1]) -
              coeffs.rho_g_h();
    return out;
}

LinearPlantCoeffs linear_coeffs(const DerivedCoefficients& coeffs, int n_nodes) {
    if (n_nodes < 2) throw std::invalid_argument("linear_coeffs: need at least 2 nodes");
    LinearPlantCoeffs lc;
    lc.epsilon = coeffs.epsilon;
    lc.c1.resize(n_nodes);
    lc.c2.resize(n_nodes);
    const double a2 = 2.0 * coeffs.alpha();
    for (int i = 0; i < n_nodes; ++i) {
        const double x = static_cast<double>(i) / (n_nodes - 1);
        lc.c1[i] = coeffs.sigma * std::exp(a2 * x);
        lc.c2[i] = coeffs.sigma * std::exp(-a2 * x);
    }
    return lc;
}

}  // namespace pipeleak
