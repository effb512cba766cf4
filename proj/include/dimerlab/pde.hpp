#pragma once
#include <vector>

#include "dimerlab/model.hpp"

namespace dimerlab {

// Continuum limit on x = n/N - 1/2 in [-1/2, 1/2]: d/dtau p = d/dx [D(x) dp/dx]
// with D(x) = 1/(4x^2) - 1, zero flux at both walls.  Finite-volume staggered
// grid of K cells (K even, so x = 0 is a face, where the singular coefficient
// is capped at D(h/2)).

double diffusion_coefficient(double x);  // requires x in [-1/2,1/2], x != 0

struct ProbabilityDensity {
  Eigen::VectorXd p;  // cell averages, size K
  double tau = 0.0;
};

struct PdeGrid {
  int K = 0;
  double h = 0;
  Eigen::VectorXd centers;  // size K
  Eigen::VectorXd face_D;   // interior faces, size K-1, center face capped
};
PdeGrid make_grid(int K);

ProbabilityDensity delta_start(int K);  // box of width 2h at x = 0

// Crank-Nicolson with two backward-Euler startup substeps and a geometric
// step ramp; unconditionally stable against the capped center coefficient.
std::vector<ProbabilityDensity> evolve_pde(int K, const ProbabilityDensity& init,
                                           const std::vector<double>& taus);

// Exact e^{tau L} of the same semi-discrete generator (test oracle).
std::vector<ProbabilityDensity> evolve_pde_spectral(
    int K, const ProbabilityDensity& init, const std::vector<double>& taus);

// Self-similar density p = (sqrt(2)/Gamma(1/4)) tau^{-1/4} exp(-x^4/(4 tau)).
double analytic_density(double x, double tau);

double mean_x2(const PdeGrid& grid, const Eigen::VectorXd& p);
double l1_distance_to_analytic(const PdeGrid& grid, const Eigen::VectorXd& p,
                               double tau);

}  // namespace dimerlab
