#include "kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pipeleak {

namespace {

constexpr double kSeriesCutoff = 15.0;
constexpr int kMaxSeriesTerms = 40;

double i0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= kMaxSeriesTerms; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * std::numeric_limits<double>::epsilon()) break;
    }
    return sum;
}

// I1(z)/z as a series; leading term 1/2.
double i1_over_z_series(double z) {
    const double q = 0.25 * z * z;
    double term = 0.5, sum = 0.5;
    for (int k = 1; k <= kMaxSeriesTerms; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < sum * std::numeric_limits<double>::epsilon()) break;
    }
    return sum;
}

// Large-argument expansion e^z/sqrt(2 pi z) * sum_k t_k with
// t_k = t_{k-1} * ((2k-1)^2 - 4 nu^2) / (8 k z), truncated at the smallest term.
double i_asymptotic(double z, int nu) {
    const double nu4 = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (odd * odd - nu4) / (8.0 * k * z);
        if (std::abs(term) >= prev) break;
        sum += term;
        prev = std::abs(term);
        if (prev < sum * std::numeric_limits<double>::epsilon()) break;
    }
    return std::exp(z) / std::sqrt(2.0 * M_PI * z) * sum;
}

void check_gain_args(double sigma, double epsilon, double L) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("gains: epsilon must be > 0");
    if (!(sigma <= 0.0)) throw std::invalid_argument("gains: sigma must be <= 0");
    if (!(L < 0.0)) throw std::invalid_argument("gains: L must be < 0");
}

// Integrand brackets with the I1 radical folded into I1(z)/z, which removes
// the 0/0 at s = 0 algebraically:
//   |sigma| sqrt(a/b) I1(k s) = (sigma^2/eps) * a * (I1(k s)/(k s)) with s = sqrt(a b).
double bracket(double s, double radical_num, double sigma, double epsilon) {
    const double k = std::abs(sigma) / epsilon;
    return sigma * bessel_i0(k * s) -
           sigma * sigma / epsilon * radical_num * bessel_i1_over_z(k * s);
}

double simpson(double a, double b, int n_panels, auto&& f) {
    if (b <= a) return 0.0;
    if (n_panels < 2) n_panels = 2;
    if (n_panels % 2 != 0) ++n_panels;
    const double h = (b - a) / n_panels;
    double sum = f(a) + f(b);
    for (int j = 1; j < n_panels; ++j) sum += f(a + j * h) * (j % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

double bessel_i0(double z) {
    if (!(z >= 0.0)) throw std::domain_error("bessel_i0: z must be >= 0");
    return z <= kSeriesCutoff ? i0_series(z) : i_asymptotic(z, 0);
}

double bessel_i1(double z) {
    if (!(z >= 0.0)) throw std::domain_error("bessel_i1: z must be >= 0");
    return z <= kSeriesCutoff ? z * i1_over_z_series(z) : i_asymptotic(z, 1);
}

double bessel_i1_over_z(double z) {
    if (!(z >= 0.0)) throw std::domain_error("bessel_i1_over_z: z must be >= 0");
    return z <= kSeriesCutoff ? i1_over_z_series(z) : i_asymptotic(z, 1) / z;
}

double gain_p1_integral(double x, double sigma, double epsilon, int n_panels) {
    return simpson(x, 1.0, n_panels, [&](double xi) {
        const double s = std::sqrt(std::max(xi * xi - x * x, 0.0));
        return std::exp(sigma / epsilon * (xi - x)) * bracket(s, xi + x, sigma, epsilon);
    });
}

double gain_p2_integral(double x, double sigma, double epsilon, int n_panels) {
    return simpson(x, 1.0, n_panels, [&](double xi) {
        const double s = std::sqrt(std::max(xi * xi - x * x, 0.0));
        return std::exp(sigma / epsilon * (xi + x)) * bracket(s, xi - x, sigma, epsilon);
    });
}

double gain_p1(double x, double sigma, double epsilon, double L, int n_panels) {
    check_gain_args(sigma, epsilon, L);
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("gain_p1: x outside [0, 1]");
    const double s = std::sqrt(std::max(1.0 - x * x, 0.0));
    const double boundary =
        0.5 * std::exp(sigma / epsilon * (1.0 - x)) * bracket(s, 1.0 + x, sigma, epsilon);
    return -L - boundary + L / (2.0 * epsilon) * gain_p1_integral(x, sigma, epsilon, n_panels);
}

double gain_p2(double x, double sigma, double epsilon, double L, int n_panels) {
    check_gain_args(sigma, epsilon, L);
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("gain_p2: x outside [0, 1]");
    const double s = std::sqrt(std::max(1.0 - x * x, 0.0));
    const double boundary =
        0.5 * std::exp(sigma / epsilon * (1.0 + x)) * bracket(s, 1.0 - x, sigma, epsilon);
    return boundary - L / (2.0 * epsilon) * gain_p2_integral(x, sigma, epsilon, n_panels);
}

GainProfile build_gain_profile(int n_nodes, const DerivedCoefficients& coeffs, double L) {
    if (n_nodes < 2) throw std::invalid_argument("build_gain_profile: need >= 2 nodes");
    check_gain_args(coeffs.sigma, coeffs.epsilon, L);

    GainProfile g;
    g.L = L;
    g.sigma = coeffs.sigma;
    g.epsilon = coeffs.epsilon;
    g.x_nodes.resize(n_nodes);
    g.p1.resize(n_nodes);
    g.p2.resize(n_nodes);
    g.p1_scaled.resize(n_nodes);
    g.p2_scaled.resize(n_nodes);

    const int panels = std::max(64, 8 * n_nodes);
    const double a = coeffs.alpha();
    for (int i = 0; i < n_nodes; ++i) {
        const double x = static_cast<double>(i) / (n_nodes - 1);
        g.x_nodes[i] = x;
        g.p1[i] = gain_p1(x, coeffs.sigma, coeffs.epsilon, L, panels);
        g.p2[i] = gain_p2(x, coeffs.sigma, coeffs.epsilon, L, panels);
        g.p1_scaled[i] = g.p1[i] * std::exp(a * (1.0 - x));
        g.p2_scaled[i] = g.p2[i] * std::exp(a * (1.0 + x));
    }
    return g;
}

}  // namespace pipeleak
