#ifndef PIPELEAK_CORE_KERNELS_HPP
#define PIPELEAK_CORE_KERNELS_HPP

#include <vector>

#include "hydraulics.hpp"

namespace pipeleak {

/// Modified Bessel function of the first kind, order 0, for z >= 0.
/// Ascending series up to z = 15, asymptotic expansion beyond.
double bessel_i0(double z);

/// Modified Bessel function of the first kind, order 1, for z >= 0.
double bessel_i1(double z);

/// I1(z)/z, finite at z = 0 (value 1/2). Evaluated without cancellation so
/// the gain formulas can take their removable-singularity limits exactly.
double bessel_i1_over_z(double z);

/// Observer output-injection gains of the boundary observer. sigma <= 0,
/// epsilon > 0, L < 0. The integral terms use composite Simpson quadrature
/// with n_panels panels (rounded up to an even count).
double gain_p1(double x, double sigma, double epsilon, double L, int n_panels = 2048);
double gain_p2(double x, double sigma, double epsilon, double L, int n_panels = 2048);

/// Integral terms alone (without the L/(2 epsilon) prefactor), exposed for
/// quadrature-order checks against independent reference integrators.
double gain_p1_integral(double x, double sigma, double epsilon, int n_panels);
double gain_p2_integral(double x, double sigma, double epsilon, int n_panels);

/// Gains sampled on the simulation grid, together with the exponentially
/// scaled variants used by the observer in (u, v) coordinates:
///   p1_scaled(x) = p1(x) exp(a (1-x)),  p2_scaled(x) = p2(x) exp(a (1+x)),
/// a = l F / (2 sqrt(beta rho)).
struct GainProfile {
    std::vector<double> x_nodes;
    std::vector<double> p1;
    std::vector<double> p2;
    std::vector<double> p1_scaled;
    std::vector<double> p2_scaled;
    double L = 0.0;        // 1/s
    double sigma = 0.0;    // 1/s
    double epsilon = 0.0;  // 1/s
};

/// Precompute the gain profile for one operating point. Gains depend only on
/// (sigma, epsilon, L) and the scaling exponent, so this runs once per run.
GainProfile build_gain_profile(int n_nodes, const DerivedCoefficients& coeffs, double L);

}  // namespace pipeleak

#endif
