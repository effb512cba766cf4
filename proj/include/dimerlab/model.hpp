#pragma once
#include <Eigen/Dense>
#include <complex>

#include "dimerlab/errors.hpp"

namespace dimerlab {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Default numerical tolerances for density-matrix invariants.
struct Tolerances {
  double trace = 1e-9;
  double herm = 1e-10;
  double psd = 1e-8;
};

// Two-site Bose-Hubbard dimer with local-density dephasing.
// Units: hbar = 1, J = 1; u = U/J, g = hbar*gamma/J.  Basis state |n, N-n>
// is indexed by the left-well occupation n = 0..N.
struct ModelParams {
  int N = 2;
  double u = 0.0;
  double g = 0.0;
};

void validate(const ModelParams& p);  // throws config_error

// Symmetric tridiagonal matrix as (diagonal, subdiagonal) pair.
struct Tridiag {
  Eigen::VectorXd diag;  // size N+1
  Eigen::VectorXd off;   // size N
};

// Hopping matrix elements a_n = sqrt((n+1)(N-n)) coupling n <-> n+1.
Eigen::VectorXd hop_amplitudes(int N);

// H: diagonal (u/2)[n(n-1) + (N-n)(N-n-1)], off-diagonal -a_n.
Tridiag build_hamiltonian(const ModelParams& p);

// Lowest eigenpair of the Hamiltonian; eigenvector components all >= 0.
struct GroundState {
  double energy;
  Eigen::VectorXd amplitudes;
};
GroundState ground_state(const ModelParams& p);
Matrix ground_state_density(const ModelParams& p);
Matrix uniform_state(int N);

// Dephasing dissipator in closed form: D(rho)_{nm} = -g (n-m)^2 rho_{nm}.
Matrix dissipator_apply(const ModelParams& p, const Matrix& rho);

// Full generator: -i[H, rho] + D(rho).
Matrix master_rhs(const ModelParams& p, const Matrix& rho);

// Allocation-free variant used by the integrator; H must come from
// build_hamiltonian(p) and out must be preallocated to the same shape.
void master_rhs_into(const ModelParams& p, const Tridiag& H, const Matrix& rho,
                     Matrix& out);

struct Observables {
  double C = 0;       // inter-well coherence
  double kappa = 0;   // left-well density fluctuations
  double P_b = 0;     // balanced-configuration probability rho_{N/2,N/2}
  double purity = 0;  // tr rho^2
};
Observables observables_of(const ModelParams& p, const Matrix& rho);

double trace_error(const Matrix& rho);
double hermiticity_error(const Matrix& rho);
double min_eigenvalue(const Matrix& rho);

}  // namespace dimerlab
