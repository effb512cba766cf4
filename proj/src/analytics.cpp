#include "dimerlab/analytics.hpp"

#include <cmath>

namespace dimerlab {

double kappa_scaling(double tau) {
  return 2.0 * kGammaThreeQuarter / kGammaQuarter * std::sqrt(tau);
}

double coherence_scaling(const ModelParams& p, double t) {
  const double gt = p.g * t;
  return kGammaThreeQuarter / (std::sqrt(2.0) * kGammaQuarter) / std::sqrt(gt);
}

double kappa_uniform(int N) { return 1.0 / 12.0 + 1.0 / (6.0 * N); }

}  // namespace dimerlab
