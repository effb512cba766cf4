#include "dimerlab/pde.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "dimerlab/analytics.hpp"

namespace dimerlab {

double diffusion_coefficient(double x) {
  if (x < -0.5 || x > 0.5 || x == 0.0)
    throw std::invalid_argument("diffusion_coefficient: x in [-1/2,1/2]\\{0}");
  return 1.0 / (4.0 * x * x) - 1.0;
}

PdeGrid make_grid(int K) {
  if (K < 4 || K % 2 != 0)
    throw config_error("pde grid: K must be even and >= 4");
  PdeGrid gr;
  gr.K = K;
  gr.h = 1.0 / K;
  gr.centers.resize(K);
  for (int k = 0; k < K; ++k) gr.centers[k] = -0.5 + gr.h * (k + 0.5);
  gr.face_D.resize(K - 1);
  for (int f = 1; f < K; ++f) {
    const double x = -0.5 + gr.h * f;
    // the face at x = 0 carries the capped value D(h/2)
    gr.face_D[f - 1] = (f == K / 2) ? diffusion_coefficient(0.5 * gr.h)
                                    : diffusion_coefficient(x);
  }
  return gr;
}

ProbabilityDensity delta_start(int K) {
  const PdeGrid gr = make_grid(K);
  ProbabilityDensity d;
  d.tau = 0;
  d.p = Eigen::VectorXd::Zero(K);
  d.p[K / 2 - 1] = 0.5 / gr.h;
  d.p[K / 2] = 0.5 / gr.h;
  return d;
}

namespace {

void check_density(const PdeGrid& gr, const Eigen::VectorXd& p) {
  if (p.size() != gr.K)
    throw std::invalid_argument("evolve_pde: wrong density size");
  if (std::abs(gr.h * p.sum() - 1.0) > 1e-6)
    throw invariant_error("evolve_pde: density not normalized");
  if (p.minCoeff() < -1e-10)
    throw invariant_error("evolve_pde: negative density in input");
}

// Tridiagonal generator L: dp_k/dtau = (F_{k+1/2} - F_{k-1/2})/h with
// F = D (p_{k+1} - p_k)/h; rows scaled by 1/h^2.
struct Tri {
  Eigen::VectorXd diag, off;  // symmetric
};

Tri generator(const PdeGrid& gr) {
  const int K = gr.K;
  Tri L;
  L.diag = Eigen::VectorXd::Zero(K);
  L.off.resize(K - 1);
  const double ih2 = 1.0 / (gr.h * gr.h);
  for (int f = 0; f < K - 1; ++f) {
    const double c = gr.face_D[f] * ih2;
    L.off[f] = c;
    L.diag[f] -= c;
    L.diag[f + 1] -= c;
  }
  return L;
}

// Thomas solve of (I - w L) x = b; the matrix is strictly diagonally dominant.
void solve_shifted(const Tri& L, double w, const Eigen::VectorXd& b,
                   Eigen::VectorXd& x, Eigen::VectorXd& cp,
                   Eigen::VectorXd& dp) {
  const int K = int(b.size());
  cp.resize(K - 1);
  dp.resize(K);
  double denom = 1.0 - w * L.diag[0];
  cp[0] = -w * L.off[0] / denom;
  dp[0] = b[0] / denom;
  for (int i = 1; i < K; ++i) {
    const double a = -w * L.off[i - 1];
    denom = (1.0 - w * L.diag[i]) - a * cp[i - 1];
    if (i < K - 1) cp[i] = -w * L.off[i] / denom;
    dp[i] = (b[i] - a * dp[i - 1]) / denom;
  }
  x.resize(K);
  x[K - 1] = dp[K - 1];
  for (int i = K - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
}

void apply(const Tri& L, const Eigen::VectorXd& p, Eigen::VectorXd& out) {
  const int K = int(p.size());
  out.resize(K);
  for (int i = 0; i < K; ++i) {
    double v = L.diag[i] * p[i];
    if (i > 0) v += L.off[i - 1] * p[i - 1];
    if (i < K - 1) v += L.off[i] * p[i + 1];
    out[i] = v;
  }
}

}  // namespace

std::vector<ProbabilityDensity> evolve_pde(int K,
                                           const ProbabilityDensity& init,
                                           const std::vector<double>& taus) {
  const PdeGrid gr = make_grid(K);
  check_density(gr, init.p);
  const Tri L = generator(gr);

  Eigen::VectorXd p = init.p, rhs, cp, dp, tmp;
  double tau = init.tau;
  bool started = false;
  std::vector<ProbabilityDensity> out;
  out.reserve(taus.size());

  // stiffest mode of the capped center face; resolved implicitly, the scale
  // only sets the startup substeps
  const double fast = gr.face_D[K / 2 - 1] / (gr.h * gr.h);

  for (double target : taus) {
    if (target < tau - 1e-18)
      throw std::invalid_argument("evolve_pde: tau grid must be increasing");
    while (tau < target) {
      // step at most 2% of current tau (self-similar clock), at least enough
      // to finish the interval
      double dt = std::max(0.02 * std::max(tau, 1.0 / fast), 1e-14);
      dt = std::min(dt, target - tau);
      if (!started) {
        // Rannacher startup: two backward-Euler half-substeps damp the
        // capped-center transient that trapezoidal stepping would ring on
        solve_shifted(L, 0.5 * dt, p, tmp, cp, dp);
        solve_shifted(L, 0.5 * dt, tmp, p, cp, dp);
        started = true;
      } else {
        apply(L, p, tmp);
        rhs = p + 0.5 * dt * tmp;
        solve_shifted(L, 0.5 * dt, rhs, p, cp, dp);
      }
      tau += dt;
    }
    if (p.minCoeff() < -1e-10)
      throw invariant_error("evolve_pde: negative density beyond 1e-10");
    ProbabilityDensity s;
    s.tau = target;
    s.p = p;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ProbabilityDensity> evolve_pde_spectral(
    int K, const ProbabilityDensity& init, const std::vector<double>& taus) {
  const PdeGrid gr = make_grid(K);
  check_density(gr, init.p);
  const Tri L = generator(gr);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(L.diag, L.off);
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::VectorXd y0 = V.transpose() * init.p;
  std::vector<ProbabilityDensity> out;
  out.reserve(taus.size());
  for (double target : taus) {
    Eigen::VectorXd y = y0;
    const double dtau = target - init.tau;
    for (int i = 0; i < K; ++i) y[i] *= std::exp(std::min(0.0, lam[i]) * dtau);
    ProbabilityDensity s;
    s.tau = target;
    s.p = V * y;
    out.push_back(std::move(s));
  }
  return out;
}

double analytic_density(double x, double tau) {
  if (tau <= 0) throw std::invalid_argument("analytic_density: tau > 0");
  const double x2 = x * x;
  return std::sqrt(2.0) / kGammaQuarter * std::pow(tau, -0.25) *
         std::exp(-x2 * x2 / (4.0 * tau));
}

double mean_x2(const PdeGrid& gr, const Eigen::VectorXd& p) {
  double s = 0;
  for (int k = 0; k < gr.K; ++k) s += gr.centers[k] * gr.centers[k] * p[k];
  return s * gr.h;
}

double l1_distance_to_analytic(const PdeGrid& gr, const Eigen::VectorXd& p,
                               double tau) {
  double s = 0;
  for (int k = 0; k < gr.K; ++k)
    s += std::abs(p[k] - analytic_density(gr.centers[k], tau));
  return s * gr.h;
}

}  // namespace dimerlab
