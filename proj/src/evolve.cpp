#include "dimerlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimerlab/reduced.hpp"

namespace dimerlab {

std::vector<double> log_samples(double t0, double t1, int per_decade) {
  if (!(t0 > 0) || !(t1 > t0) || per_decade < 1)
    throw config_error("log_samples: need 0 < t0 < t1 and per_decade >= 1");
  std::vector<double> out;
  const double decades = std::log10(t1 / t0);
  const int n = std::max(1, int(std::ceil(decades * per_decade)));
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    out.push_back(t0 * std::pow(10.0, decades * i / n));
  out.back() = t1;
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat, the embedded error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1,
                  double atol, double rtol) {
  double acc = 0;
  const auto n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc =
        atol + rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
    const double q = std::abs(err.data()[i]) / sc;
    acc += q * q;
  }
  return std::sqrt(acc / double(n));
}

struct Integrator {
  const ModelParams& p;
  const Tridiag H;
  const double atol, rtol;
  const double max_step;
  Matrix k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, errm;
  size_t accepted = 0, rejected = 0;
  double err_prev = 1.0;
  double dt;

  Integrator(const ModelParams& params, double atol_, double rtol_)
      : p(params),
        H(build_hamiltonian(params)),
        atol(atol_),
        rtol(rtol_),
        max_step(params.g > 0
                     ? 0.1 / (params.g * double(params.N) * params.N)
                     : std::numeric_limits<double>::infinity()) {
    const int dim = p.N + 1;
    for (Matrix* m : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &ytmp, &ynew, &errm})
      m->resize(dim, dim);
    dt = std::min(max_step, 1e-4);
  }

  void rhs(const Matrix& y, Matrix& out) { master_rhs_into(p, H, y, out); }

  // One attempted step of size h from (t, y); returns the error norm and
  // fills ynew.
  double attempt(double h, const Matrix& y) {
    rhs(y, k1);
    ytmp = y + h * a21 * k1;
    rhs(ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(ynew, k7);
    errm = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return error_norm(errm, y, ynew, atol, rtol);
  }

  // Advance y in place to exactly t_target.
  void advance(Matrix& y, double& t, double t_target, bool renormalize,
               double& max_drift) {
    while (t < t_target) {
      double h = std::min({dt, max_step, t_target - t});
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw numeric_error(
            "evolve: step size underflow (stiffness; raise tolerances or "
            "reduce g*N^2)");
      const double err = attempt(h, y);
      if (err <= 1.0) {
        t += h;
        y.swap(ynew);
        ++accepted;
        if (renormalize) {
          const double drift = std::abs(y.trace().real() - 1.0) +
                               std::abs(y.trace().imag());
          max_drift = std::max(max_drift, drift);
          y = 0.5 * (y + y.adjoint().eval());
          y /= y.trace().real();
        }
        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.14) *
                           std::pow(err_prev, 0.08);
        err_prev = std::max(err, 1e-10);
        dt = h * std::clamp(fac, 0.2, 5.0);
      } else {
        ++rejected;
        dt = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
  }
};

SamplePoint make_sample(const ModelParams& p, const Matrix& rho, double t,
                        double tstar, double drift, bool want_diag) {
  SamplePoint s;
  s.t = t;
  s.gamma_t = p.g * t;
  s.tau = std::isfinite(tstar) ? t / tstar : 0.0;
  s.obs = observables_of(p, rho);
  s.trace_err = drift;
  s.min_eig = min_eigenvalue(rho);
  if (want_diag) s.diag = rho.diagonal().real();
  return s;
}

SamplePoint make_reduced_sample(const ModelParams& p, const ReducedState& rs,
                                double tstar, double drift, bool want_diag) {
  SamplePoint s;
  s.t = rs.tau * tstar;
  s.gamma_t = p.g * s.t;
  s.tau = rs.tau;
  s.from_reduced = true;
  s.obs.C = reconstructed_coherence(p, rs);
  s.obs.kappa = reduced_kappa(rs.diag);
  s.obs.P_b = rs.diag[p.N / 2];
  double pur = rs.diag.squaredNorm();
  for (int n = 0; n < p.N; ++n) {
    const cxd od = slaved_offdiagonal(p, rs, n);
    pur += 2.0 * std::norm(od);
  }
  s.obs.purity = pur;
  s.trace_err = std::max(drift, std::abs(rs.diag.sum() - 1.0));
  s.min_eig = rs.diag.minCoeff();
  if (want_diag) s.diag = rs.diag;
  return s;
}

void check_sample_grid(const EvolutionConfig& cfg) {
  if (!(cfg.t_end > 0)) throw config_error("evolve: t_end must be > 0");
  if (cfg.rel_tol <= 0 || cfg.abs_tol <= 0)
    throw config_error("evolve: tolerances must be > 0");
  double prev = 0;
  for (double t : cfg.sample_times) {
    if (t <= prev) throw config_error("evolve: sample times must increase");
    if (t > cfg.t_end * (1 + 1e-12))
      throw config_error("evolve: sample time beyond t_end");
    prev = t;
  }
}

}  // namespace

EvolveResult evolve_full(const ModelParams& p, const Matrix& rho0, double t0,
                         const EvolutionConfig& cfg) {
  validate(p);
  check_sample_grid(cfg);
  const double tstar = t_star(p);

  EvolveResult res;
  res.series.params = p;
  Matrix rho = rho0;
  double t = t0;
  double drift = 0;
  Integrator integ(p, cfg.abs_tol, cfg.rel_tol);

  const double t_switch =
      (cfg.handoff && p.g > 0) ? cfg.t_switch_gamma / p.g : cfg.t_end;
  const bool use_handoff = cfg.handoff && cfg.t_end > t_switch;
  if (cfg.handoff && p.u <= 0)
    throw config_error("evolve: handoff requires u > 0");
  const double t_full_end = use_handoff ? std::min(cfg.t_end, t_switch)
                                        : cfg.t_end;

  size_t i = 0;
  for (; i < cfg.sample_times.size() && cfg.sample_times[i] <= t_full_end * (1 + 1e-12);
       ++i) {
    const double ts = std::min(cfg.sample_times[i], t_full_end);
    if (ts <= t) continue;
    integ.advance(rho, t, ts, cfg.renormalize, drift);
    res.series.points.push_back(
        make_sample(p, rho, t, tstar, drift, cfg.record_diagonals));
    const Tolerances tol;
    if (res.series.points.back().min_eig < -10 * tol.psd)
      throw invariant_error("evolve: density lost positivity beyond 10x tol");
    if (!cfg.renormalize) {
      const double terr = std::abs(rho.trace().real() - 1.0);
      res.series.points.back().trace_err = terr;
      if (terr > 1e-7)
        throw invariant_error("evolve: trace drift beyond 10x tolerance");
    }
  }
  if (t < t_full_end) integ.advance(rho, t, t_full_end, cfg.renormalize, drift);
  res.series.accepted_steps = integ.accepted;
  res.series.rejected_steps = integ.rejected;
  res.rho_final = rho;
  res.t_final = t;

  if (use_handoff && i < cfg.sample_times.size()) {
    ReducedState init;
    init.diag = rho.diagonal().real();
    init.diag /= init.diag.sum();
    init.tau = t / tstar;
    std::vector<double> taus;
    for (size_t j = i; j < cfg.sample_times.size(); ++j)
      taus.push_back(cfg.sample_times[j] / tstar);
    const auto states = evolve_reduced(p, init, taus);
    for (const auto& rs : states)
      res.series.points.push_back(
          make_reduced_sample(p, rs, tstar, drift, cfg.record_diagonals));
  }
  return res;
}

ObservableSeries evolve_from(const ModelParams& p, const Matrix& rho0,
                             double t0, const EvolutionConfig& cfg) {
  return evolve_full(p, rho0, t0, cfg).series;
}

ObservableSeries evolve(const ModelParams& p, const EvolutionConfig& cfg) {
  return evolve_full(p, ground_state_density(p), 0.0, cfg).series;
}

SamplePoint sample_from_reduced(const ModelParams& p, const ReducedState& s,
                                bool record_diagonals) {
  return make_reduced_sample(p, s, t_star(p), 0.0, record_diagonals);
}

}  // namespace dimerlab
