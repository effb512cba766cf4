#include "dimerlab/model.hpp"

#include <Eigen/Eigenvalues>

namespace dimerlab {

void validate(const ModelParams& p) {
  if (p.N < 2 || p.N % 2 != 0)
    throw config_error("N must be even and >= 2, got " + std::to_string(p.N));
  if (p.u < 0) throw config_error("u must be >= 0");
  if (p.g < 0) throw config_error("g must be >= 0");
}

Eigen::VectorXd hop_amplitudes(int N) {
  Eigen::VectorXd a(N);
  for (int n = 0; n < N; ++n)
    a[n] = std::sqrt(double(n + 1) * double(N - n));
  return a;
}

Tridiag build_hamiltonian(const ModelParams& p) {
  validate(p);
  const int N = p.N;
  Tridiag h;
  h.diag.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    const double nl = n, nr = N - n;
    h.diag[n] = 0.5 * p.u * (nl * (nl - 1.0) + nr * (nr - 1.0));
  }
  h.off = -hop_amplitudes(N);
  return h;
}

GroundState ground_state(const ModelParams& p) {
  const Tridiag h = build_hamiltonian(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(h.diag, h.off);
  GroundState gs;
  gs.energy = es.eigenvalues()[0];
  gs.amplitudes = es.eigenvectors().col(0);
  // negative couplings make the lowest mode nodeless; fix the overall sign
  if (gs.amplitudes.sum() < 0) gs.amplitudes = -gs.amplitudes;
  return gs;
}

Matrix ground_state_density(const ModelParams& p) {
  const Eigen::VectorXd v = ground_state(p).amplitudes;
  return (v * v.transpose()).cast<cxd>();
}

Matrix uniform_state(int N) {
  return Matrix::Identity(N + 1, N + 1) / double(N + 1);
}

Matrix dissipator_apply(const ModelParams& p, const Matrix& rho) {
  validate(p);
  const int dim = p.N + 1;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("dissipator_apply: dimension mismatch");
  Matrix out(dim, dim);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) {
      const double d = n - m;
      out(n, m) = -p.g * d * d * rho(n, m);
    }
  return out;
}

void master_rhs_into(const ModelParams& p, const Tridiag& H, const Matrix& rho,
                     Matrix& out) {
  const int dim = p.N + 1;
  // out = -i (H rho - rho H) - g (n-m)^2 rho, with tridiagonal H
  const double* d = H.diag.data();
  const double* e = H.off.data();
  for (int m = 0; m < dim; ++m) {
    const cxd* rc = rho.col(m).data();
    cxd* oc = out.col(m).data();
    for (int n = 0; n < dim; ++n) {
      cxd hr = d[n] * rc[n];                 // (H rho)_{nm}
      if (n > 0) hr += e[n - 1] * rc[n - 1];
      if (n < dim - 1) hr += e[n] * rc[n + 1];
      cxd rh = rho(n, m) * d[m];             // (rho H)_{nm}
      if (m > 0) rh += rho(n, m - 1) * e[m - 1];
      if (m < dim - 1) rh += rho(n, m + 1) * e[m];
      const double nm = double(n - m);
      oc[n] = cxd(0, -1) * (hr - rh) - p.g * nm * nm * rc[n];
    }
  }
}

Matrix master_rhs(const ModelParams& p, const Matrix& rho) {
  validate(p);
  const int dim = p.N + 1;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("master_rhs: dimension mismatch");
  const Tridiag H = build_hamiltonian(p);
  Matrix out(dim, dim);
  master_rhs_into(p, H, rho, out);
  return out;
}

Observables observables_of(const ModelParams& p, const Matrix& rho) {
  const int N = p.N;
  Observables o;
  const Eigen::VectorXd a = hop_amplitudes(N);
  double c = 0;
  for (int n = 0; n < N; ++n) c += a[n] * rho(n + 1, n).real();
  o.C = 2.0 * c;
  double m1 = 0, m2 = 0;
  for (int n = 0; n <= N; ++n) {
    const double pn = rho(n, n).real();
    m1 += n * pn;
    m2 += double(n) * n * pn;
  }
  o.kappa = m2 - m1 * m1;
  o.P_b = rho(N / 2, N / 2).real();
  o.purity = rho.squaredNorm();
  return o;
}

double trace_error(const Matrix& rho) { return std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag()); }

double hermiticity_error(const Matrix& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace dimerlab
