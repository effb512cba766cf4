#pragma once
#include <vector>

#include "dimerlab/model.hpp"

namespace dimerlab {

// Diagonal (population) sector of the adiabatically eliminated dynamics,
// living on the dimensionless time tau = t / t_star.

struct ReducedState {
  Eigen::VectorXd diag;  // rho_{n,n}, size N+1
  double tau = 0.0;
};

// t* = 2 N^2 u^2 / g in hbar/J units; infinite for g = 0 or u = 0.
double t_star(const ModelParams& p);

// Weight table W_k = k(N-k+1) / (k - N/2 - 1/2)^2 for k = 1..N (0-based slot
// k-1).  W_k multiplies the population flux through the face n=k-1 <-> n=k.
Eigen::VectorXd weight_table(int N);

// d/dtau rho_{nn} = W_{n+1} Drho_n - W_n Drho_{n-1}, Drho_n = N^2 (rho_{n+1,n+1}
// - rho_{n,n}); zero-flux ends.  Conserves the total population exactly.
Eigen::VectorXd reduced_rhs(int N, const Eigen::VectorXd& diag);

// Exact propagator e^{tau A} of the flux generator (symmetric negative
// semidefinite tridiagonal), via one eigendecomposition per grid size.
class ReducedPropagator {
 public:
  explicit ReducedPropagator(int N);
  Eigen::VectorXd advance(const Eigen::VectorXd& p0, double dtau) const;
  const Eigen::VectorXd& eigenvalues() const { return evals_; }

 private:
  Eigen::MatrixXd evecs_;
  Eigen::VectorXd evals_;
};

// Evolve from init.tau to each requested absolute tau (>= init.tau).
std::vector<ReducedState> evolve_reduced(const ModelParams& p,
                                         const ReducedState& init,
                                         const std::vector<double>& taus);

// Slaved first off-diagonal rho_{n,n+1} for 0 <= n < N:
//   rho_{n,n+1} = (a_n / (u K_n N^2)) (1 + i g/(u K_n)) Drho_n,
// with a_n = sqrt((n+1)(N-n)) and the signed denominator K_n = N - 2n - 1.
// The sign of K_n is essential: magnitudes alone cancel the reconstructed
// coherence for symmetric states.
cxd slaved_offdiagonal(const ModelParams& p, const ReducedState& s, int n);

// C rebuilt from the slaved off-diagonals: 2 sum_n a_n Re rho_{n,n+1}.
double reconstructed_coherence(const ModelParams& p, const ReducedState& s);

Eigen::VectorXd delta_initial(int N);  // point mass at n = N/2

// kappa of a population vector: sum n^2 p_n - (sum n p_n)^2.
double reduced_kappa(const Eigen::VectorXd& diag);

}  // namespace dimerlab
