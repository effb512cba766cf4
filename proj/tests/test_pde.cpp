#include <cmath>

#include "dimerlab/model.hpp"
#include "dimerlab/pde.hpp"
#include "dimerlab/reduced.hpp"
#include "doctest.h"

using namespace dimerlab;

TEST_CASE("diffusion coefficient hits its landmarks") {
  CHECK(diffusion_coefficient(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(diffusion_coefficient(-0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(diffusion_coefficient(0.25) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(diffusion_coefficient(1e-4) > 1e7);
  // monotone increase toward the center
  double prev = diffusion_coefficient(0.5);
  for (double x = 0.45; x > 0.01; x -= 0.05) {
    CHECK(diffusion_coefficient(x) > prev);
    prev = diffusion_coefficient(x);
  }
}

TEST_CASE("grid construction and the capped center face") {
  const auto grid = make_grid(8);
  CHECK(grid.h == doctest::Approx(1.0 / 8));
  CHECK(grid.centers[0] == doctest::Approx(-0.5 + 0.5 / 8));
  CHECK(grid.centers[7] == doctest::Approx(0.5 - 0.5 / 8));
  REQUIRE(grid.face_D.size() == 7);
  // face at x = 0 capped at D(h/2); neighbours keep the raw coefficient
  CHECK(grid.face_D[3] ==
        doctest::Approx(diffusion_coefficient(grid.h / 2)).epsilon(1e-14));
  CHECK(grid.face_D[2] ==
        doctest::Approx(diffusion_coefficient(-grid.h)).epsilon(1e-14));
  CHECK_THROWS_AS(make_grid(7), config_error);
  CHECK_THROWS_AS(make_grid(2), config_error);
}

TEST_CASE("uniform density is stationary and mass is conserved") {
  const int K = 64;
  ProbabilityDensity init;
  init.p = Eigen::VectorXd::Constant(K, 1.0);
  init.tau = 0;
  const auto frames = evolve_pde(K, init, {1e-4, 1e-2, 0.5});
  for (const auto& fr : frames)
    CHECK((fr.p.array() - 1.0).abs().maxCoeff() < 1e-9);

  const auto spread = evolve_pde(K, delta_start(K), {1e-4, 1e-3, 1e-2});
  const double h = 1.0 / K;
  for (const auto& fr : spread) {
    CHECK(std::abs(h * fr.p.sum() - 1.0) < 1e-9);
    CHECK(fr.p.minCoeff() > -1e-10);
  }
}

TEST_CASE("implicit stepping agrees with the exact semigroup") {
  const int K = 100;
  const auto a = evolve_pde(K, delta_start(K), {3e-4, 3e-3});
  const auto b = evolve_pde_spectral(K, delta_start(K), {3e-4, 3e-3});
  for (size_t i = 0; i < a.size(); ++i) {
    const double scale = b[i].p.maxCoeff();
    CHECK((a[i].p - b[i].p).cwiseAbs().maxCoeff() / scale < 2e-3);
  }
}

TEST_CASE("mirror symmetry is preserved") {
  const int K = 80;
  const auto frames = evolve_pde(K, delta_start(K), {1e-4, 1e-2});
  for (const auto& fr : frames)
    for (int i = 0; i < K; ++i)
      CHECK(std::abs(fr.p[i] - fr.p[K - 1 - i]) < 1e-9);
}

TEST_CASE("second moment obeys the flux identity") {
  // summing x^2 against the conservative update telescopes to a face sum:
  // d<x^2>/dtau = -2 sum_f x_f D_f (p_{i+1} - p_i), walls dropping out
  const int K = 400;
  const auto grid = make_grid(K);
  const double tau0 = 1e-4, dtau = 1e-6;
  const auto frames = evolve_pde(K, delta_start(K), {tau0, tau0 + dtau});
  const double dm =
      (mean_x2(grid, frames[1].p) - mean_x2(grid, frames[0].p)) / dtau;
  const Eigen::VectorXd mid = 0.5 * (frames[0].p + frames[1].p);
  double rate = 0;
  for (int f = 0; f < K - 1; ++f) {
    const double xf = -0.5 + (f + 1) * grid.h;
    rate += -2.0 * xf * grid.face_D[f] * (mid[f + 1] - mid[f]);
  }
  CHECK(dm == doctest::Approx(rate).epsilon(0.02));
}

TEST_CASE("closed-form density is normalized and self-similar") {
  // quadrature over the real line, transformed to s = x / tau^{1/4}
  const double tau = 7e-3;
  const int M = 40000;
  const double L = 12.0, ds = 2 * L / M;
  double mass = 0;
  const double s4 = std::pow(tau, 0.25);
  for (int i = 0; i <= M; ++i) {
    const double s = -L + i * ds;
    const double w = (i == 0 || i == M) ? 0.5 : 1.0;
    mass += w * analytic_density(s * s4, tau) * s4 * ds;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

  CHECK(analytic_density(0.0, 1.0) == doctest::Approx(0.39006).epsilon(1e-4));

  for (double s : {0.5, 2.0}) {
    const double x = 0.13, t0 = 4e-3;
    CHECK(analytic_density(x, t0) ==
          doctest::Approx(s * analytic_density(s * x, s * s * s * s * t0))
              .epsilon(1e-12));
  }
}

TEST_CASE("discrete populations approach the continuum profile") {
  const int N = 160, K = 400;
  const double tau = 1e-3;
  const ModelParams mp{N, 20, 1};
  ReducedState init{delta_initial(N), 0.0};
  const auto red = evolve_reduced(mp, init, {tau})[0];
  const auto pde = evolve_pde(K, delta_start(K), {tau})[0];
  const auto grid = make_grid(K);

  // p(x) = N rho_{n,n} at x = n/N - 1/2, linearly interpolated to the cells
  double l1 = 0;
  for (int i = 0; i < K; ++i) {
    const double xn = (grid.centers[i] + 0.5) * N;
    const int n0 = std::min(N - 1, std::max(0, int(std::floor(xn))));
    const double w = xn - n0;
    const double p_red = N * ((1 - w) * red.diag[n0] + w * red.diag[n0 + 1]);
    l1 += std::abs(p_red - pde.p[i]) * grid.h;
  }
  CHECK(l1 < 0.03);
}

TEST_CASE("negative input is rejected") {
  const int K = 16;
  ProbabilityDensity bad;
  bad.p = Eigen::VectorXd::Constant(K, 1.0);
  bad.p[3] = -0.2;
  bad.tau = 0;
  CHECK_THROWS_AS(evolve_pde(K, bad, {1e-3}), invariant_error);
}
