#pragma once
#include <Eigen/Sparse>
#include <vector>

#include "dimerlab/fit.hpp"
#include "dimerlab/model.hpp"

namespace dimerlab {

inline constexpr int kMaxDenseN = 40;  // dense spectra capped at (N+1)^2 = 1681

// Column-stacking vectorization: vec(rho)_{n + (N+1) m} = rho_{n,m}, so that
// M vec(rho) = vec(master_rhs(rho)).  At most 5 nonzeros per row.
Eigen::SparseMatrix<cxd> build_liouvillian(const ModelParams& p);

struct SpectrumResult {
  Eigen::VectorXcd eigenvalues;  // of M itself, i.e. the set {-lambda_alpha}
  double gap = 0;                // smallest strictly positive Re(lambda)
  Matrix steady;                 // unit-trace steady state
  double band_lo = 0, band_hi = 0;  // Re(lambda) edges of the slow band
  int band_count = 0;            // members with Re(lambda) < g/2, gap excluded
};

// Full dense spectrum (N <= kMaxDenseN): eigenvalues sorted by Re, steady
// state identified and verified, gap and slow band extracted.
SpectrumResult spectrum(const ModelParams& p);

// Gap only, via shift-invert Arnoldi on the sparse Liouvillian; usable past
// the dense cap.
double spectral_gap_iterative(const ModelParams& p, int krylov = 80);

// Log-log least squares through (x_i, gap_i); thin wrapper over loglog_fit.
FitReport fit_gap_scaling(const std::vector<std::pair<double, double>>& pts);

// Exact propagation rho(t) = exp(M t) rho0 through the dense eigendecomposition;
// small-N test oracle for the time stepper.
Matrix exp_propagate(const ModelParams& p, const Matrix& rho0, double t);

}  // namespace dimerlab
