#pragma once
#include "dimerlab/model.hpp"

namespace dimerlab {

// Gamma-function constants to 15+ significant digits (unit-tested against a
// quadrature evaluation; no special-functions dependency for two numbers).
inline constexpr double kGammaQuarter = 3.62560990822190831;
inline constexpr double kGammaThreeQuarter = 1.22541670246517765;

// kappa/N^2 = (2 Gamma(3/4)/Gamma(1/4)) sqrt(tau) ~= 0.67598 sqrt(tau).
double kappa_scaling(double tau);

// C/N = (Gamma(3/4)/(sqrt(2) Gamma(1/4))) / sqrt(gamma t) ~= 0.23900/sqrt(gamma t).
double coherence_scaling(const ModelParams& p, double t);

// Long-time uniform-state fluctuation level kappa/N^2 = 1/12 + 1/(6N).
double kappa_uniform(int N);

}  // namespace dimerlab
