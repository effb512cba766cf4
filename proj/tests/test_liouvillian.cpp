#include <cmath>
#include <random>

#include "dimerlab/evolve.hpp"
#include "dimerlab/liouvillian.hpp"
#include "dimerlab/model.hpp"
#include "doctest.h"

using namespace dimerlab;

namespace {

Eigen::VectorXcd vec_of(const Matrix& rho) {
  const int dim = int(rho.rows());
  Eigen::VectorXcd v(dim * dim);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) v[n + dim * m] = rho(n, m);
  return v;
}

Matrix random_matrix(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Matrix A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = cxd(nd(rng), nd(rng));
  return A;
}

}  // namespace

TEST_CASE("superoperator reproduces the matrix-valued generator") {
  const ModelParams p{6, 13, 0.9};
  const auto M = build_liouvillian(p);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Matrix rho = random_matrix(p.N + 1, seed);
    const Eigen::VectorXcd lhs = M * vec_of(rho);
    const Eigen::VectorXcd rhs = vec_of(master_rhs(p, rho));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("superoperator rows stay sparse") {
  const ModelParams p{10, 7, 1.2};
  const auto M = build_liouvillian(p);
  const int dim2 = (p.N + 1) * (p.N + 1);
  Eigen::VectorXi per_row = Eigen::VectorXi::Zero(dim2);
  for (int k = 0; k < M.outerSize(); ++k)
    for (Eigen::SparseMatrix<cxd>::InnerIterator it(M, k); it; ++it)
      per_row[it.row()] += 1;
  CHECK(per_row.maxCoeff() <= 5);
}

TEST_CASE("fully mixed state is annihilated") {
  const ModelParams p{8, 20, 1};
  const auto M = build_liouvillian(p);
  const Eigen::VectorXcd v = vec_of(uniform_state(p.N));
  CHECK((M * v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("without hopping every Fock projector is steady") {
  // generator is linear in its three pieces, so subtracting the u=0, g=0
  // superoperator (pure hopping) leaves interactions plus dephasing
  const int N = 6;
  const auto M_full = build_liouvillian(ModelParams{N, 20, 1});
  const auto M_hop = build_liouvillian(ModelParams{N, 0, 0});
  const Eigen::SparseMatrix<cxd> M_frozen = M_full - M_hop;
  for (int n = 0; n <= N; ++n) {
    Matrix proj = Matrix::Zero(N + 1, N + 1);
    proj(n, n) = 1.0;
    CHECK((M_frozen * vec_of(proj)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("dense spectrum finds the mixed steady state and a clean gap") {
  const ModelParams p{10, 20, 1};
  const auto r = spectrum(p);
  const int dim = p.N + 1;
  CHECK((r.steady - uniform_state(p.N)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(r.gap > 0);
  CHECK(r.band_count > 0);
  CHECK(r.band_lo >= r.gap);
  CHECK(r.band_hi < 0.5 * p.g + 1e-12);
  REQUIRE(r.eigenvalues.size() == dim * dim);

  // no growing modes
  for (int i = 0; i < r.eigenvalues.size(); ++i)
    CHECK(r.eigenvalues[i].real() < 1e-9);

  // conjugate pairing
  for (int i = 0; i < r.eigenvalues.size(); ++i) {
    const cxd w = r.eigenvalues[i];
    if (std::abs(w.imag()) < 1e-12) continue;
    bool found = false;
    for (int j = 0; j < r.eigenvalues.size(); ++j)
      if (std::abs(r.eigenvalues[j] - std::conj(w)) < 1e-7) {
        found = true;
        break;
      }
    CHECK(found);
  }
}

TEST_CASE("dense diagonalization is capped") {
  CHECK_THROWS_AS(spectrum(ModelParams{42, 20, 1}), config_error);
}

TEST_CASE("shift-invert gap agrees with the dense gap") {
  const ModelParams p{12, 20, 1};
  const double dense = spectrum(p).gap;
  const double iter = spectral_gap_iterative(p);
  CHECK(iter == doctest::Approx(dense).epsilon(1e-8));
}

TEST_CASE("gap fits recover synthetic power laws") {
  std::vector<std::pair<double, double>> pts;
  for (double N : {8, 12, 16, 24, 32}) pts.emplace_back(N, 3.7 / (N * N));
  auto fit = fit_gap_scaling(pts);
  CHECK(fit.exponent == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(3.7).epsilon(1e-12));

  for (auto& [x, y] : pts) y = 0.42;
  fit = fit_gap_scaling(pts);
  CHECK(std::abs(fit.exponent) < 1e-12);

  pts.resize(3);
  CHECK_THROWS_AS(fit_gap_scaling(pts), config_error);
  pts = {{8, 1}, {12, 0.0}, {16, 1}, {24, 1}};
  CHECK_THROWS_AS(fit_gap_scaling(pts), config_error);
}

TEST_CASE("spectral propagation matches the time stepper") {
  const ModelParams p{8, 5, 1};
  const Matrix rho0 = ground_state_density(p);
  for (double t : {0.1, 1.0, 10.0}) {
    EvolutionConfig ec;
    ec.t_end = t;
    ec.sample_times = {t};
    ec.renormalize = false;
    const auto res = evolve_full(p, rho0, 0.0, ec);
    const Matrix oracle = exp_propagate(p, rho0, t);
    CHECK((res.rho_final - oracle).cwiseAbs().maxCoeff() < 1e-6);
  }
}
