#ifndef PIPELEAK_CORE_RIEMANN_HPP
#define PIPELEAK_CORE_RIEMANN_HPP

#include <vector>

#include "hydraulics.hpp"

namespace pipeleak {

/// Characteristic variables sampled on a uniform grid over x in [0, 1].
/// u travels toward x = 1, v toward x = 0; both carry units of m^3/s.
struct RiemannField {
    std::vector<double> u;
    std::vector<double> v;

    int grid_n() const { return static_cast<int>(u.size()); }
};

/// Leak parameters entering the coordinate change: total size and the point
/// position z* used by the delta-potential. Pre-onset state is (0, z*).
struct LeakState {
    double chi = 0.0;     // m^3/s
    double z_star = 0.0;  // m
};

/// Coupling coefficients of the transformed linear transport system,
/// sampled on the grid. c1(x) c2(x) = sigma^2 holds identically.
struct LinearPlantCoeffs {
    double epsilon = 0.0;    // 1/s
    std::vector<double> c1;  // 1/s
    std::vector<double> c2;  // 1/s
};

/// Physical (p, q) profiles to characteristic (u, v) coordinates.
RiemannField to_riemann(const PhysicalProfile& phys,
                        const DerivedCoefficients& coeffs,
                        const LeakState& leak);

/// Inverse of to_riemann.
PhysicalProfile from_riemann(const RiemannField& field,
                             const DerivedCoefficients& coeffs,
                             const LeakState& leak);

/// Output signal y = u(1) reconstructed from outlet measurements:
///   y = (q_l + (A/sqrt(beta rho)) (p_l + rho g h)) / 2.
/// No leak quantities enter; the leak potential vanishes at the outlet.
double measurement_y(double p_l, double q_l, const DerivedCoefficients& coeffs);

/// Incoming characteristic at the outlet, v(1), from outlet measurements:
///   v(1) = (q_l - (A/sqrt(beta rho)) (p_l + rho g h)) / 2.
double boundary_v1(double p_l, double q_l, const DerivedCoefficients& coeffs);

/// Boundary input of the delta-coordinate linear system, built from outlet
/// measurements with the exponential scale factor evaluated at x = 1:
///   U = exp(-a)/2 (q_l - q_in - (A/sqrt(beta rho))(p_l - p_out + rho g h + F l q_in / A)).
double boundary_input_U(double p_l, double q_l, const DerivedCoefficients& coeffs);

/// Mean values of the (u, v) decomposition around the operating point.
/// They satisfy mean_u + mean_v = q_in and are fixed by requiring that
/// boundary_input_U equals the scaled mean-removed v(1) exactly.
double mean_u(const DerivedCoefficients& coeffs);
double mean_v(const DerivedCoefficients& coeffs);

/// Offset of the final coordinate scaling at position x, for a given leak
/// pair: (A / (2 sqrt(beta rho))) (p_out + (F/A) delta(x l) chi).
double delta_offset(double x, const DerivedCoefficients& coeffs, const LeakState& leak);

/// (u, v) field to the delta coordinates of the linear system:
///   du(x) = (u - mean_u - off(x)) exp(+a x),  dv(x) = (v - mean_v + off(x)) exp(-a x).
RiemannField riemann_to_delta(const RiemannField& field,
                              const DerivedCoefficients& coeffs,
                              const LeakState& leak);

/// Inverse of riemann_to_delta.
RiemannField delta_to_riemann(const RiemannField& delta,
                              const DerivedCoefficients& coeffs,
                              const LeakState& leak);

/// Sample c1, c2 on an n-node uniform grid.
LinearPlantCoeffs linear_coeffs(const DerivedCoefficients& coeffs, int n_nodes);

/// Physical inlet pressure recovered from a characteristic field.
double inlet_pressure_from_field(const RiemannField& field,
                                 const DerivedCoefficients& coeffs,
                                 const LeakState& leak);

/// Physical outlet measurements recovered from a characteristic field.
struct OutletSignals {
    double p_l = 0.0;  // Pa
    double q_l = 0.0;  // m^3/s
};
OutletSignals outlet_from_field(const RiemannField& field, const DerivedCoefficients& coeffs);

}  // namespace pipeleak

#endif
