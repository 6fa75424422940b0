#include "simcore.hpp"

#include <cmath>

namespace pipeleak {

Grid Grid::make(int n_cells, double t_end, double epsilon) {
    if (n_cells < 16) throw std::invalid_argument("grid.n_cells must be >= 16");
    if (!(t_end > 0.0)) throw std::invalid_argument("grid.t_end must be > 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("grid: epsilon must be > 0");
    Grid g;
    g.n_cells = n_cells;
    g.dx = 1.0 / n_cells;
    g.dt = g.dx / epsilon;
    g.t_end = t_end;
    g.n_steps = static_cast<int>(std::ceil(t_end / g.dt));
    return g;
}

void NoiseSpec::validate(double dt) const {
    if (!(amplitude_frac >= 0.0 && amplitude_frac <= 0.5))
        throw std::invalid_argument("noise.amplitude_frac must lie in [0, 0.5]");
    if (enabled && !(hold_time >= dt))
        throw std::invalid_argument("noise.hold_time must be >= the simulation dt");
}

namespace detail {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void check_divergence(const RiemannField& f, double t, double q_scale) {
    const double bound = 1e6 * std::abs(q_scale);
    for (double x : f.u)
        if (!(std::abs(x) <= bound)) throw DivergenceError(t);
    for (double x : f.v)
        if (!(std::abs(x) <= bound)) throw DivergenceError(t);
}

}  // namespace detail

double inlet_signal(double t, const OperatingPoint& op, const NoiseSpec& noise) {
    if (!noise.enabled || noise.amplitude_frac == 0.0) return op.q_in;
    const auto window = static_cast<std::uint64_t>(std::floor(t / noise.hold_time));
    const std::uint64_t h = detail::splitmix64(noise.seed ^ (window * 0x9e3779b97f4a7c15ULL));
    // 53-bit mantissa draw in [0, 1), mapped to [-1, 1).
    const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
    return op.q_in + (2.0 * unit - 1.0) * noise.amplitude_frac * op.q_in;
}

namespace {

// Midpoint-rule source increment for the quadratic friction acting equally on
// both families: w evolves at twice the single-family rate during the substep.
inline double friction_increment(double w, double c_f, double dt) {
    const double k1 = -c_f * std::abs(w) * w;
    const double wm = w + dt * k1;
    return dt * -c_f * std::abs(wm) * wm;
}

}  // namespace

PlantState plant_step(const PlantState& state, double q0, double p_l,
                      const LeakSpec& leak, const DerivedCoefficients& coeffs,
                      const Grid& grid) {
    const int n = grid.n_cells;
    const double t_new = state.t + grid.dt;
    const double chi = state.leak_active ? leak.size : 0.0;
    const double c_f = coeffs.friction_source_coeff();
    const double area = coeffs.geom.area;
    const double sbr = coeffs.sqrt_beta_rho();
    const double outlet_gauge = area / sbr * (p_l + coeffs.rho_g_h());

    PlantState next;
    next.t = t_new;
    next.leak_active = state.leak_active;
    auto& u = next.field.u;
    auto& v = next.field.v;
    u.resize(n + 1);
    v.resize(n + 1);

    // Exact transport: u one cell toward x = 1, v one cell toward x = 0.
    for (int i = 1; i <= n; ++i) u[i] = state.field.u[i - 1];
    for (int i = 0; i < n; ++i) v[i] = state.field.v[i + 1];
    // Incoming characteristics at the boundaries, pre-source: the outlet value
    // follows from the imposed pressure, the inlet one from the imposed flow.
    v[n] = u[n] - outlet_gauge;
    u[0] = -v[0] + q0 - chi;

    for (int i = 0; i <= n; ++i) {
        const double z = grid.x_of(i) * coeffs.geom.length;
        const double w = u[i] + v[i] - leak_delta_prime(z, leak.position) * chi;
        const double inc = friction_increment(w, c_f, grid.dt);
        u[i] += inc;
        v[i] += inc;
    }

    // Boundary conditions hold exactly at the end of the step. The outlet
    // relation is already preserved (both families got the same increment).
    u[0] = -v[0] + q0 - chi;

    detail::check_divergence(next.field, t_new, coeffs.op.q_in);
    return next;
}

PlantState activate_leak(const PlantState& state, const LeakSpec& leak,
                         const DerivedCoefficients& coeffs) {
    if (state.leak_active || leak.size == 0.0) {
        PlantState s = state;
        s.leak_active = leak.size > 0.0;
        return s;
    }
    const PhysicalProfile phys = from_riemann(state.field, coeffs, LeakState{0.0, leak.position});
    PlantState next;
    next.t = state.t;
    next.leak_active = true;
    next.field = to_riemann(phys, coeffs, LeakState{leak.size, leak.position});
    return next;
}

PlantState linear_plant_step(const PlantState& state, const LinearBoundaryInputs& inputs,
                             const LinearPlantCoeffs& lc, double chi, const Grid& grid,
                             double q_scale) {
    const int n = grid.n_cells;
    const double t_new = state.t + grid.dt;

    PlantState next;
    next.t = t_new;
    next.leak_active = state.leak_active;
    auto& u = next.field.u;
    auto& v = next.field.v;
    u.resize(n + 1);
    v.resize(n + 1);

    for (int i = 1; i <= n; ++i) u[i] = state.field.u[i - 1];
    for (int i = 0; i < n; ++i) v[i] = state.field.v[i + 1];
    v[n] = inputs.U;
    u[0] = -v[0] + inputs.dq0 - chi;

    for (int i = 0; i <= n; ++i) {
        const double k1u = lc.c1[i] * v[i];
        const double k1v = lc.c2[i] * u[i];
        const double um = u[i] + 0.5 * grid.dt * k1u;
        const double vm = v[i] + 0.5 * grid.dt * k1v;
        u[i] += grid.dt * lc.c1[i] * vm;
        v[i] += grid.dt * lc.c2[i] * um;
    }

    u[0] = -v[0] + inputs.dq0 - chi;
    v[n] = inputs.U;

    detail::check_divergence(next.field, t_new, q_scale);
    return next;
}

}  // namespace pipeleak
