#ifndef PIPELEAK_CORE_VALIDATION_HPP
#define PIPELEAK_CORE_VALIDATION_HPP

#include <string>
#include <vector>

#include "harness.hpp"

namespace pipeleak::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Reference scenario at the default parameter set (1 km water pipeline,
/// 0.02 m^3/s leak at 700 m switching on at 15 s). Matches the bundled
/// config files.
ScenarioConfig reference_scenario(double q_in);

/// Extended-precision series oracles (30 ascending terms) used as the
/// independent reference for the Bessel implementations on [0, 15].
long double oracle_bessel_i0(long double z);
long double oracle_bessel_i1(long double z);

/// Reference gain integrals by dense trapezoid quadrature over the oracle
/// Bessel evaluations (n_nodes samples of the integrand).
double oracle_gain_p1_integral(double x, double sigma, double epsilon, int n_nodes);
double oracle_gain_p2_integral(double x, double sigma, double epsilon, int n_nodes);

/// Run the complete acceptance suite. Expensive (several full closed-loop
/// simulations); results come back one per criterion, pass/fail plus detail.
std::vector<CheckResult> run_all_checks();

}  // namespace pipeleak::validation

#endif
