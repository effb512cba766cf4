#include "dimerlab/reduced.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace dimerlab {

double t_star(const ModelParams& p) {
  if (p.g <= 0 || p.u <= 0) return std::numeric_limits<double>::infinity();
  return 2.0 * double(p.N) * p.N * p.u * p.u / p.g;
}

Eigen::VectorXd weight_table(int N) {
  if (N < 2 || N % 2 != 0)
    throw config_error("weight_table: N must be even and >= 2");
  Eigen::VectorXd W(N);
  for (int k = 1; k <= N; ++k) {
    const double den = k - 0.5 * N - 0.5;  // half-integer for even N
    W[k - 1] = double(k) * double(N - k + 1) / (den * den);
  }
  return W;
}

namespace {

// Face conductances c_n = N^2 W_{n+1} between populations n and n+1.
Eigen::VectorXd face_conductances(int N) {
  const Eigen::VectorXd W = weight_table(N);
  return double(N) * N * W;
}

}  // namespace

Eigen::VectorXd reduced_rhs(int N, const Eigen::VectorXd& diag) {
  if (N < 2 || N % 2 != 0)
    throw config_error("reduced_rhs: N must be even and >= 2");
  if (diag.size() != N + 1)
    throw std::invalid_argument("reduced_rhs: wrong state size");
  const Eigen::VectorXd c = face_conductances(N);
  Eigen::VectorXd out(N + 1);
  for (int n = 0; n <= N; ++n) {
    double v = 0;
    if (n < N) v += c[n] * (diag[n + 1] - diag[n]);
    if (n > 0) v -= c[n - 1] * (diag[n] - diag[n - 1]);
    out[n] = v;
  }
  return out;
}

ReducedPropagator::ReducedPropagator(int N) {
  const Eigen::VectorXd c = face_conductances(N);
  Eigen::VectorXd d(N + 1);
  for (int n = 0; n <= N; ++n) {
    double v = 0;
    if (n < N) v -= c[n];
    if (n > 0) v -= c[n - 1];
    d[n] = v;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, c);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

Eigen::VectorXd ReducedPropagator::advance(const Eigen::VectorXd& p0,
                                           double dtau) const {
  Eigen::VectorXd y = evecs_.transpose() * p0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    y[i] *= std::exp(std::min(0.0, evals_[i]) * dtau);
  return evecs_ * y;
}

std::vector<ReducedState> evolve_reduced(const ModelParams& p,
                                         const ReducedState& init,
                                         const std::vector<double>& taus) {
  validate(p);
  if (init.diag.size() != p.N + 1)
    throw std::invalid_argument("evolve_reduced: wrong state size");
  const ReducedPropagator prop(p.N);
  std::vector<ReducedState> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    if (tau < init.tau - 1e-15)
      throw std::invalid_argument("evolve_reduced: tau before initial time");
    ReducedState s;
    s.tau = tau;
    s.diag = prop.advance(init.diag, std::max(0.0, tau - init.tau));
    out.push_back(std::move(s));
  }
  return out;
}

cxd slaved_offdiagonal(const ModelParams& p, const ReducedState& s, int n) {
  validate(p);
  const int N = p.N;
  if (n < 0 || n >= N)
    throw std::out_of_range("slaved_offdiagonal: n out of range");
  if (p.u <= 0) throw std::invalid_argument("slaved_offdiagonal: needs u > 0");
  const double a_n = std::sqrt(double(n + 1) * double(N - n));
  const double K = double(N - 2 * n - 1);  // odd for even N, never zero
  const double drho = double(N) * N * (s.diag[n + 1] - s.diag[n]);
  const double re = a_n / (p.u * K * double(N) * N);
  return re * cxd(1.0, p.g / (p.u * K)) * drho;
}

double reconstructed_coherence(const ModelParams& p, const ReducedState& s) {
  double c = 0;
  for (int n = 0; n < p.N; ++n) {
    const double a_n = std::sqrt(double(n + 1) * double(p.N - n));
    c += a_n * slaved_offdiagonal(p, s, n).real();
  }
  return 2.0 * c;
}

Eigen::VectorXd delta_initial(int N) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(N + 1);
  p[N / 2] = 1.0;
  return p;
}

double reduced_kappa(const Eigen::VectorXd& diag) {
  double m1 = 0, m2 = 0;
  for (Eigen::Index n = 0; n < diag.size(); ++n) {
    m1 += double(n) * diag[n];
    m2 += double(n) * double(n) * diag[n];
  }
  return m2 - m1 * m1;
}

}  // namespace dimerlab
