#ifndef PIPELEAK_CORE_HYDRAULICS_HPP
#define PIPELEAK_CORE_HYDRAULICS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pipeleak {

/// Fluid constants. SI units throughout.
struct FluidProperties {
    double bulk_modulus;       // Pa
    double density;            // kg/m^3
    double dynamic_viscosity;  // Pa*s
    double gravity;            // m/s^2

    void validate() const;
};

/// Pipe geometry. The coordinate z runs from inlet (z = 0) to outlet (z = l).
/// elevation_drop is outlet elevation minus inlet elevation (negative when the
/// inlet sits above the outlet), so sin_phi() = elevation_drop / length.
struct PipeGeometry {
    double length;             // m
    double diameter;           // m
    double area;               // m^2
    double surface_roughness;  // m
    double elevation_drop;     // m, signed (outlet minus inlet)

    double sin_phi() const { return elevation_drop / length; }

    /// Cross-section area from the diameter.
    static double area_from_diameter(double d) { return M_PI * d * d / 4.0; }

    void validate() const;
};

/// Mean operating point the boundary signals fluctuate around.
struct OperatingPoint {
    double q_in;   // m^3/s, mean inlet flow
    double p_out;  // Pa, mean outlet pressure

    void validate() const;
};

/// Point-leak description. gamma_d characterises the leak type
/// (about 0.8 for point leaks).
struct LeakSpec {
    double size;        // m^3/s, total leaked flow chi
    double position;    // m, leak position z* in (0, l)
    double onset_time;  // s
    double gamma_d;     // dimensionless, in (0, 1]

    void validate(const PipeGeometry& geom) const;
};

/// Coefficients derived from a configuration at one operating point.
/// sigma = -F/(2 rho) and eta = gamma_d * q_in hold exactly by construction.
struct DerivedCoefficients {
    FluidProperties fluid;
    PipeGeometry geom;
    OperatingPoint op;

    double friction_f;   // dimensionless Darcy factor, frozen at |q_in|
    double reynolds;     // dimensionless, at |q_in|
    double big_f;        // kg/(m^3 s), F = f rho |q_in| / (D A)
    double epsilon;      // 1/s, transport rate of the unit-interval system
    double sigma;        // 1/s, -F/(2 rho)
    double eta;          // m^3/s, gamma_d * q_in
    double elevation_h;  // m, integral of sin(phi) over the pipe length

    double sqrt_beta_rho() const { return std::sqrt(fluid.bulk_modulus * fluid.density); }
    double wave_speed() const { return std::sqrt(fluid.bulk_modulus / fluid.density); }
    /// Exponent rate of the final coordinate scaling, l F / (2 sqrt(beta rho)).
    double alpha() const { return geom.length * big_f / (2.0 * sqrt_beta_rho()); }
    /// Friction source coefficient f / (4 D A) of the transport system.
    double friction_source_coeff() const {
        return friction_f / (4.0 * geom.diameter * geom.area);
    }
    /// rho g h gauge term appearing in the outlet boundary relations.
    double rho_g_h() const { return fluid.density * fluid.gravity * elevation_h; }
};

/// Sampled pressure/flow profiles on a uniform grid over z in [0, l].
struct PhysicalProfile {
    std::vector<double> p;  // Pa
    std::vector<double> q;  // m^3/s
};

/// Re = rho q D / (A mu). Sign follows the sign of q.
double reynolds_number(double q, const FluidProperties& fluid, const PipeGeometry& geom);

/// Darcy friction factor from the explicit turbulent correlation
///   1/sqrt(f) = -1.8 log10((E/(3.7 D))^1.11 + 6.9/Re).
/// Throws std::domain_error for Re <= 0 or when the correlation degenerates
/// (right-hand side <= 0, e.g. E = 0 and Re <= 6.9).
double friction_factor(double reynolds, double surface_roughness, double diameter);

DerivedCoefficients derive_coefficients(const FluidProperties& fluid,
                                        const PipeGeometry& geom,
                                        const OperatingPoint& op,
                                        const LeakSpec& leak);

/// Same, but with the friction factor supplied directly instead of evaluated
/// from the correlation. Used by configurations that pin f (including f = 0).
DerivedCoefficients derive_coefficients_with_friction(const FluidProperties& fluid,
                                                      const PipeGeometry& geom,
                                                      const OperatingPoint& op,
                                                      const LeakSpec& leak,
                                                      double friction_f);

/// Leak potential delta(z) = max(z, z*) - z for a point leak at z*.
/// Rejects z outside [0, l].
double leak_delta(double z, const LeakSpec& leak, const PipeGeometry& geom);

/// Spatial derivative of the leak potential: H(z - z*) - 1, with H(0) := 1.
/// Values are -1 upstream of the leak and 0 at and downstream of it.
double leak_delta_prime(double z, double z_star);

/// No-leak equilibrium: q(z) = q_in and p(z) integrates the momentum balance
/// from the fixed outlet pressure. n_nodes >= 2 uniform samples over [0, l].
PhysicalProfile steady_state(const FluidProperties& fluid,
                             const PipeGeometry& geom,
                             const OperatingPoint& op,
                             int n_nodes);

/// Equilibrium with an active point leak: q(z) = q_in upstream of z* and
/// q_in - chi downstream, pressure from the piecewise momentum balance.
PhysicalProfile steady_state_with_leak(const FluidProperties& fluid,
                                       const PipeGeometry& geom,
                                       const OperatingPoint& op,
                                       const LeakSpec& leak,
                                       int n_nodes);

}  // namespace pipeleak

#endif
