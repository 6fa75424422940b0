#include "hydraulics.hpp"

#include <algorithm>
#include <cmath>

namespace pipeleak {

void FluidProperties::validate() const {
    if (!(bulk_modulus > 0.0)) throw std::invalid_argument("fluid.bulk_modulus must be > 0");
    if (!(density > 0.0)) throw std::invalid_argument("fluid.density must be > 0");
    if (!(dynamic_viscosity > 0.0)) throw std::invalid_argument("fluid.dynamic_viscosity must be > 0");
    if (!(gravity >= 0.0)) throw std::invalid_argument("fluid.gravity must be >= 0");
}

void PipeGeometry::validate() const {
    if (!(length > 0.0)) throw std::invalid_argument("geometry.length must be > 0");
    if (!(diameter > 0.0)) throw std::invalid_argument("geometry.diameter must be > 0");
    if (!(area > 0.0)) throw std::invalid_argument("geometry.area must be > 0");
    if (!(surface_roughness >= 0.0)) throw std::invalid_argument("geometry.surface_roughness must be >= 0");
    if (std::abs(sin_phi()) > 1.0) throw std::invalid_argument("geometry.elevation_drop exceeds pipe length");
}

void OperatingPoint::validate() const {
    if (!std::isfinite(q_in) || !std::isfinite(p_out))
        throw std::invalid_argument("operating point must be finite");
}

void LeakSpec::validate(const PipeGeometry& geom) const {
    if (!(size >= 0.0)) throw std::invalid_argument("leak.size must be >= 0");
    if (size > 0.0 && !(position > 0.0 && position < geom.length))
        throw std::invalid_argument("leak.position must lie strictly inside (0, length)");
    if (!(gamma_d > 0.0 && gamma_d <= 1.0))
        throw std::invalid_argument("leak.gamma_d must lie in (0, 1]");
    if (!(onset_time >= 0.0)) throw std::invalid_argument("leak.onset_time must be >= 0");
}

double reynolds_number(double q, const FluidProperties& fluid, const PipeGeometry& geom) {
    return fluid.density * q * geom.diameter / (geom.area * fluid.dynamic_viscosity);
}

double friction_factor(double reynolds, double surface_roughness, double diameter) {
    if (!(reynolds > 0.0))
        throw std::domain_error("friction_factor: Reynolds number must be > 0");
    const double rough = std::pow(surface_roughness / (3.7 * diameter), 1.11);
    const double rhs = -1.8 * std::log10(rough + 6.9 / reynolds);
    if (!(rhs > 0.0))
        throw std::domain_error("friction_factor: correlation degenerates (1/sqrt(f) <= 0)");
    return 1.0 / (rhs * rhs);
}

static DerivedCoefficients assemble_coefficients(const FluidProperties& fluid,
                                                 const PipeGeometry& geom,
                                                 const OperatingPoint& op,
                                                 const LeakSpec& leak,
                                                 double f, double re) {
    DerivedCoefficients c;
    c.fluid = fluid;
    c.geom = geom;
    c.op = op;
    c.friction_f = f;
    c.reynolds = re;
    c.big_f = f * fluid.density * std::abs(op.q_in) / (geom.diameter * geom.area);
    c.epsilon = std::sqrt(fluid.bulk_modulus / fluid.density) / geom.length;
    c.sigma = -c.big_f / (2.0 * fluid.density);
    c.eta = leak.gamma_d * op.q_in;
    c.elevation_h = geom.elevation_drop;
    return c;
}

DerivedCoefficients derive_coefficients(const FluidProperties& fluid,
                                        const PipeGeometry& geom,
                                        const OperatingPoint& op,
                                        const LeakSpec& leak) {
    fluid.validate();
    geom.validate();
    if (op.q_in == 0.0)
        throw std::invalid_argument("derive_coefficients: q_in must be nonzero");
    const double re = reynolds_number(std::abs(op.q_in), fluid, geom);
    const double f = friction_factor(re, geom.surface_roughness, geom.diameter);
    return assemble_coefficients(fluid, geom, op, leak, f, re);
}

DerivedCoefficients derive_coefficients_with_friction(const FluidProperties& fluid,
                                                      const PipeGeometry& geom,
                                                      const OperatingPoint& op,
                                                      const LeakSpec& leak,
                                                      double friction_f) {
    fluid.validate();
    geom.validate();
    if (!(friction_f >= 0.0))
        throw std::invalid_argument("friction factor override must be >= 0");
    const double re = reynolds_number(std::abs(op.q_in), fluid, geom);
    return assemble_coefficients(fluid, geom, op, leak, friction_f, re);
}

double leak_delta(double z, const LeakSpec& leak, const PipeGeometry& geom) {
    if (!(z >= 0.0 && z <= geom.length))
        throw std::out_of_range("leak_delta: z outside [0, length]");
    return std::max(z, leak.position) - z;
}

double leak_delta_prime(double z, double z_star) {
    // Right-continuous Heaviside, H(0) := 1.
    return (z >= z_star ? 1.0 : 0.0) - 1.0;
}

static PhysicalProfile steady_profile(const FluidProperties& fluid,
                                      const PipeGeometry& geom,
                                      const OperatingPoint& op,
                                      const LeakSpec* leak,
                                      int n_nodes) {
    if (n_nodes < 2) throw std::invalid_argument("steady_state: need at least 2 nodes");
    PhysicalProfile prof;
    prof.p.resize(n_nodes);
    prof.q.resize(n_nodes);

    // Friction factor is frozen at the operating point; zero flow carries no
    // friction term at all, so the correlation is never evaluated for q_in = 0.
    double f = 0.0;
    if (op.q_in != 0.0) {
        const double re = reynolds_number(std::abs(op.q_in), fluid, geom);
        f = friction_factor(re, geom.surface_roughness, geom.diameter);
    }
    const auto grad = [&](double q) {
        // -p_z at flow q: rho g sin(phi) + f rho |q| q / (2 D A^2)
        return fluid.density * fluid.gravity * geom.sin_phi() +
               f * fluid.density * std::abs(q) * q /
                   (2.0 * geom.diameter * geom.area * geom.area);
    };

    const double dz = geom.length / (n_nodes - 1);
    const double chi = leak ? leak->size : 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        const double z = i * dz;
        const double q_here = (leak && z >= leak->position) ? op.q_in - chi : op.q_in;
        prof.q[i] = q_here;
        if (!leak) {
            prof.p[i] = op.p_out + (geom.length - z) * grad(op.q_in);
        } else {
            // Piecewise-linear pressure: integrate -p_z from the outlet back
            // through the leak position.
            const double zs = leak->position;
            if (z >= zs) {
                prof.p[i] = op.p_out + (geom.length - z) * grad(op.q_in - chi);
            } else {
                prof.p[i] = op.p_out + (geom.length - zs) * grad(op.q_in - chi) +
                            (zs - z) * grad(op.q_in);
            }
        }
    }
    return prof;
}

PhysicalProfile steady_state(const FluidProperties& fluid,
                             const PipeGeometry& geom,
                             const OperatingPoint& op,
                             int n_nodes) {
    return steady_profile(fluid, geom, op, nullptr, n_nodes);
}

PhysicalProfile steady_state_with_leak(const FluidProperties& fluid,
                                       const PipeGeometry& geom,
                                       const OperatingPoint& op,
                                       const LeakSpec& leak,
                                       int n_nodes) {
    return steady_profile(fluid, geom, op, &leak, n_nodes);
}

}  // namespace pipeleak
