#ifndef PIPELEAK_CORE_SIMCORE_HPP
#define PIPELEAK_CORE_SIMCORE_HPP

#include <cstdint>
#include <stdexcept>

#include "riemann.hpp"

namespace pipeleak {

/// Thrown when a state leaves the blow-up guard band. Carries the simulated
/// time at which the guard tripped.
struct DivergenceError : std::runtime_error {
    double t;
    explicit DivergenceError(double time)
        : std::runtime_error("state diverged at t = " + std::to_string(time)), t(time) {}
};

/// Uniform grid over x in [0, 1] stepped at unit Courant number: dt = dx / epsilon,
/// so characteristics advance exactly one cell per step and transport is exact.
struct Grid {
    int n_cells = 0;
    double dx = 0.0;     // dimensionless
    double dt = 0.0;     // s
    double t_end = 0.0;  // s
    int n_steps = 0;

    int n_nodes() const { return n_cells + 1; }
    double x_of(int i) const { return static_cast<double>(i) / n_cells; }

    static Grid make(int n_cells, double t_end, double epsilon);
};

/// Piecewise-constant inlet-flow perturbation, reproducible from (seed, window).
struct NoiseSpec {
    std::uint64_t seed = 0;
    double amplitude_frac = 0.0;  // fraction of q_in, in [0, 0.5]
    double hold_time = 0.5;      // s, >= dt
    bool enabled = false;

    void validate(double dt) const;
};

/// Inlet flow q0(t): the mean flow plus a perturbation held constant over
/// each hold_time window, drawn uniformly from +/- amplitude_frac * q_in.
double inlet_signal(double t, const OperatingPoint& op, const NoiseSpec& noise);

/// Plant state in characteristic coordinates.
struct PlantState {
    RiemannField field;
    double t = 0.0;
    bool leak_active = false;
};

/// One unit-CFL step of the transport system with quadratic friction.
/// Transport shifts each family one cell; the friction source
/// -(f / 4 D A) |w| w with w = u + v - delta'(x l) chi acts on both families
/// through a two-stage midpoint rule; boundaries at the new time impose
/// q(0) = q0 and the fixed outlet pressure p_l.
PlantState plant_step(const PlantState& state, double q0, double p_l,
                      const LeakSpec& leak, const DerivedCoefficients& coeffs,
                      const Grid& grid);

/// Re-projects the state through the coordinate change when the leak switches
/// on, so the physical pressure and flow stay continuous across the onset.
PlantState activate_leak(const PlantState& state, const LeakSpec& leak,
                         const DerivedCoefficients& coeffs);

/// Boundary inputs of the linear validation system.
struct LinearBoundaryInputs {
    double dq0 = 0.0;  // m^3/s, q0 - q_in
    double U = 0.0;    // m^3/s, incoming characteristic at x = 1
};

/// One unit-CFL step of the linear system: same transport skeleton, sources
/// c1(x) dv and c2(x) du by the midpoint rule, boundaries
/// du(0) = -dv(0) + dq0 - chi and dv(1) = U.
PlantState linear_plant_step(const PlantState& state, const LinearBoundaryInputs& inputs,
                             const LinearPlantCoeffs& lc, double chi, const Grid& grid,
                             double q_scale);

namespace detail {
/// Shared blow-up guard: trips when any |u| or |v| exceeds 1e6 * q_scale.
void check_divergence(const RiemannField& f, double t, double q_scale);
/// SplitMix64 hash step; the counter-based noise stream builds on it.
std::uint64_t splitmix64(std::uint64_t x);
}  // namespace detail

}  // namespace pipeleak

#endif
