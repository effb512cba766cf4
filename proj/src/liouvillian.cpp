#include "dimerlab/liouvillian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#ifdef DIMERLAB_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace dimerlab {

Eigen::SparseMatrix<cxd> build_liouvillian(const ModelParams& p) {
  validate(p);
  const int dim = p.N + 1;
  const Tridiag H = build_hamiltonian(p);
  const auto idx = [dim](int n, int m) { return n + dim * m; };
  std::vector<Eigen::Triplet<cxd>> trip;
  trip.reserve(size_t(dim) * dim * 5);
  const cxd mi(0, -1), pi(0, 1);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) {
      const int row = idx(n, m);
      // -i (H rho)_{nm}
      trip.emplace_back(row, idx(n, m), mi * H.diag[n]);
      if (n > 0) trip.emplace_back(row, idx(n - 1, m), mi * H.off[n - 1]);
      if (n < dim - 1) trip.emplace_back(row, idx(n + 1, m), mi * H.off[n]);
      // +i (rho H)_{nm}
      trip.emplace_back(row, idx(n, m), pi * H.diag[m]);
      if (m > 0) trip.emplace_back(row, idx(n, m - 1), pi * H.off[m - 1]);
      if (m < dim - 1) trip.emplace_back(row, idx(n, m + 1), pi * H.off[m]);
      // dephasing
      const double d = double(n - m);
      trip.emplace_back(row, idx(n, m), cxd(-p.g * d * d, 0));
    }
  Eigen::SparseMatrix<cxd> M(dim * dim, dim * dim);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();
  return M;
}

namespace {

Eigen::VectorXcd dense_eigenvalues(const Matrix& M, Matrix* right_vecs) {
#ifdef DIMERLAB_HAVE_LAPACKE
  const lapack_int n = lapack_int(M.rows());
  Matrix A = M;  // zgeev overwrites
  Eigen::VectorXcd w(n);
  Matrix vr;
  lapack_int info;
  if (right_vecs) {
    vr.resize(n, n);
    info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n,
                         reinterpret_cast<lapack_complex_double*>(A.data()), n,
                         reinterpret_cast<lapack_complex_double*>(w.data()),
                         nullptr, 1,
                         reinterpret_cast<lapack_complex_double*>(vr.data()),
                         n);
  } else {
    info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n,
                         reinterpret_cast<lapack_complex_double*>(A.data()), n,
                         reinterpret_cast<lapack_complex_double*>(w.data()),
                         nullptr, 1, nullptr, 1);
  }
  if (info != 0)
    throw numeric_error("zgeev failed, info=" + std::to_string(info));
  if (right_vecs) *right_vecs = std::move(vr);
  return w;
#else
  Eigen::ComplexEigenSolver<Matrix> es(M, right_vecs != nullptr);
  if (es.info() != Eigen::Success)
    throw numeric_error("complex eigensolver failed to converge");
  if (right_vecs) *right_vecs = es.eigenvectors();
  return es.eigenvalues();
#endif
}

}  // namespace

SpectrumResult spectrum(const ModelParams& p) {
  validate(p);
  if (p.N > kMaxDenseN)
    throw config_error("spectrum: N exceeds dense cap " +
                       std::to_string(kMaxDenseN) +
                       "; use the iterative gap solver");
  const int dim = p.N + 1;
  const Matrix M = build_liouvillian(p).toDense();
  Matrix vr;
  Eigen::VectorXcd w = dense_eigenvalues(M, &vr);

  // steady state: eigenvalue of smallest modulus
  Eigen::Index i_steady = 0;
  double best = std::abs(w[0]);
  for (Eigen::Index i = 1; i < w.size(); ++i)
    if (std::abs(w[i]) < best) best = std::abs(w[i]), i_steady = i;

  SpectrumResult r;
  Matrix steady = Eigen::Map<const Matrix>(vr.col(i_steady).data(), dim, dim);
  steady = 0.5 * (steady + steady.adjoint().eval());
  const double tr = steady.trace().real();
  if (std::abs(tr) < 1e-12)
    throw numeric_error("spectrum: steady candidate is traceless");
  r.steady = steady / tr;

  // gap = smallest strictly positive Re(lambda) = -Re(eigenvalue of M)
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (i == i_steady) continue;
    gap = std::min(gap, -w[i].real());
  }
  if (!(gap > 0) || gap < 10 * std::abs(w[i_steady]))
    throw numeric_error("spectrum: gap not separated from steady eigenvalue");
  r.gap = gap;

  // slow band: Re(lambda) < g/2, steady and the gap mode excluded
  Eigen::Index i_gap = -1;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (i != i_steady && -w[i].real() == gap) {
      i_gap = i;
      break;
    }
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  int count = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (i == i_steady || i == i_gap) continue;
    const double re = -w[i].real();
    if (re < 0.5 * p.g) {
      lo = std::min(lo, re);
      hi = std::max(hi, re);
      ++count;
    }
  }
  r.band_count = count;
  r.band_lo = count ? lo : std::numeric_limits<double>::quiet_NaN();
  r.band_hi = count ? hi : std::numeric_limits<double>::quiet_NaN();

  std::sort(w.data(), w.data() + w.size(), [](cxd a, cxd b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
  });
  r.eigenvalues = w;
  return r;
}

double spectral_gap_iterative(const ModelParams& p, int krylov) {
  validate(p);
  const int dim2 = (p.N + 1) * (p.N + 1);
  krylov = std::min(krylov, dim2);
  Eigen::SparseMatrix<cxd> M = build_liouvillian(p);

  // shift between the steady eigenvalue (0) and the expected gap scale
  const double scale =
      (p.u > 0) ? p.g / (p.u * p.u * double(p.N) * p.N) : p.g;
  const cxd sigma(-7.0 * scale, 0.0);
  Eigen::SparseMatrix<cxd> A = M;
  for (int k = 0; k < dim2; ++k) A.coeffRef(k, k) -= sigma;
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cxd>> lu(A);
  if (lu.info() != Eigen::Success)
    throw numeric_error("spectral_gap_iterative: factorization failed");

  // Arnoldi on (M - sigma)^{-1}
  Eigen::MatrixXcd V(dim2, krylov + 1);
  Eigen::MatrixXcd Hk = Eigen::MatrixXcd::Zero(krylov + 1, krylov);
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(dim2);
  for (int k = 0; k < dim2; ++k) v[k] += cxd(0.0, double((k * 2654435761u) % 97) / 97.0);
  v.normalize();
  V.col(0) = v;
  int m = krylov;
  for (int j = 0; j < krylov; ++j) {
    Eigen::VectorXcd wv = lu.solve(V.col(j));
    for (int reo = 0; reo < 2; ++reo)
      for (int i = 0; i <= j; ++i) {
        const cxd hij = V.col(i).dot(wv);
        Hk(i, j) += hij;
        wv -= hij * V.col(i);
      }
    const double nrm = wv.norm();
    Hk(j + 1, j) = nrm;
    if (nrm < 1e-12) {
      m = j + 1;
      break;
    }
    V.col(j + 1) = wv / nrm;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Hk.topLeftCorner(m, m));
  if (es.info() != Eigen::Success)
    throw numeric_error("spectral_gap_iterative: Ritz solve failed");

  // Ritz values theta of (M-sigma)^{-1} map back to lambda_M = sigma + 1/theta
  std::vector<double> res;
  for (int i = 0; i < m; ++i) {
    const cxd theta = es.eigenvalues()[i];
    if (std::abs(theta) < 1e-14) continue;
    const cxd lam = sigma + 1.0 / theta;
    res.push_back(-lam.real());
  }
  std::sort(res.begin(), res.end());
  // discard the steady mode (|lambda| ~ 0); the gap is the next distinct level
  for (double r : res)
    if (r > 0.05 * scale) return r;
  throw numeric_error("spectral_gap_iterative: no eigenvalue beyond steady");
}

FitReport fit_gap_scaling(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 4)
    throw config_error("fit_gap_scaling: need >= 4 points");
  std::vector<double> x, y;
  for (auto& [a, b] : pts) {
    if (!(b > 0)) throw config_error("fit_gap_scaling: gaps must be > 0");
    x.push_back(a);
    y.push_back(b);
  }
  return loglog_fit(x, y);
}

Matrix exp_propagate(const ModelParams& p, const Matrix& rho0, double t) {
  validate(p);
  const int dim = p.N + 1;
  const Matrix M = build_liouvillian(p).toDense();
  Eigen::ComplexEigenSolver<Matrix> es(M, true);
  if (es.info() != Eigen::Success)
    throw numeric_error("exp_propagate: eigensolver failed");
  Eigen::Map<const Eigen::VectorXcd> v0(rho0.data(), dim * dim);
  Eigen::VectorXcd y = es.eigenvectors().partialPivLu().solve(v0);
  for (Eigen::Index i = 0; i < y.size(); ++i)
    y[i] *= std::exp(es.eigenvalues()[i] * t);
  Eigen::VectorXcd vt = es.eigenvectors() * y;
  return Eigen::Map<const Matrix>(vt.data(), dim, dim);
}

}  // namespace dimerlab
