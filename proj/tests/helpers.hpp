#ifndef PIPELEAK_TESTS_HELPERS_HPP
#define PIPELEAK_TESTS_HELPERS_HPP

#include <cmath>
#include <cstdint>

#include "core/harness.hpp"

namespace testutil {

inline pipeleak::FluidProperties water() { return {2.15e9, 1000.0, 1.0016e-3, 9.8}; }

inline pipeleak::PipeGeometry reference_pipe() {
    pipeleak::PipeGeometry g;
    g.length = 1000.0;
    g.diameter = 0.5;
    g.area = pipeleak::PipeGeometry::area_from_diameter(0.5);
    g.surface_roughness = 0.0;
    g.elevation_drop = -10.0;
    return g;
}

inline pipeleak::PipeGeometry flat_pipe() {
    pipeleak::PipeGeometry g = reference_pipe();
    g.elevation_drop = 0.0;
    return g;
}

inline pipeleak::LeakSpec reference_leak() { return {0.02, 700.0, 15.0, 0.8}; }

inline pipeleak::DerivedCoefficients coeffs_at(double q_in) {
    return pipeleak::derive_coefficients(water(), reference_pipe(), {q_in, 1.0e5},
                                         reference_leak());
}

// Small deterministic uniform stream for property-style tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    double uniform(double lo, double hi) {
        state_ = pipeleak::detail::splitmix64(state_);
        return lo + (hi - lo) * (static_cast<double>(state_ >> 11) * 0x1.0p-53);
    }

private:
    std::uint64_t state_;
};

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testutil

#endif
