#include <doctest.h>

#include "rft/quasiballistic.hpp"
#include "rft/run.hpp"

using namespace rft;

TEST_CASE("no disorder gives f = 1") {
  const auto set = waveguide_modes(2, 25.5);
  const cplx gamma(1.0 / 0.6, 1e-6);
  const QbState st = qb_solve(set, 0.0, gamma);
  for (const auto& f : st.f) CHECK(std::abs(f - 1.0) < 1e-15);
  CHECK(std::abs(st.mean_f - 1.0) < 1e-15);
  CHECK(std::abs(st.sigma * st.sigma - 1.0 / (1.0 - gamma)) < 1e-12);
  CHECK(std::abs(qb_gen_fun(st, set) - 1.0 / (1.0 - gamma)) < 1e-12);
}

TEST_CASE("output is self-consistent") {
  for (const auto& set : {waveguide_modes(2, 25.5), slab_quadrature(2, 64, 0.5)})
    for (double T : {0.3, 0.8, 0.97}) {
      const cplx gamma(1.0 / T, 1e-6);
      const QbState st = qb_solve(set, 0.5, gamma);
      CHECK(std::abs(st.sigma * st.sigma - (1.0 + gamma / (1.0 - gamma) * st.mean_f * st.mean_f)) <
            1e-12);
      cplx mean = 0.0;
      for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(std::abs(st.f[i] - qb_f(set.directions[i].mu, st.mean_f, gamma, 0.5)) < 1e-12);
        mean += set.weight[0][i] * st.f[i];
      }
      CHECK(std::abs(mean - st.mean_f) < 1e-11);
    }
}

TEST_CASE("sigma branch does not matter") {
  const cplx gamma(1.0 / 0.7, 1e-6), m(0.8, 0.3), mu(0.4, 0.1);
  const cplx s = std::sqrt(1.0 + gamma / (1.0 - gamma) * m * m);
  const cplx beta = 0.25 / mu;
  CHECK(std::abs(std::tanh(beta * s) / s - std::tanh(-beta * s) / (-s)) < 1e-15);
}

TEST_CASE("real gamma below one gives real F") {
  const auto set = waveguide_modes(2, 25.5);
  const QbState st = qb_solve(set, 0.2, cplx(0.5, 0.0));
  CHECK(std::abs(qb_gen_fun(st, set).imag()) < 1e-14);
}

TEST_CASE("single direction matches an independent scalar fixed point") {
  const auto one = single_direction(1.0);
  for (double lol : {0.1, 0.5}) {
    const cplx gamma(1.0 / 0.8, 1e-6);
    cplx f = 1.0;
    for (int it = 0; it < 100000; ++it) {
      const cplx r = gamma / (1.0 - gamma);
      const cplx s = std::sqrt(1.0 + r * f * f);
      const cplx t = std::tanh(0.5 * lol * s) / s;
      f = 0.6 * f + 0.4 * (1.0 - (1.0 - f) * t) / (1.0 + (1.0 + r * f) * t);
    }
    const QbState st = qb_solve(one, lol, gamma);
    CHECK(std::abs(qb_gen_fun(st, one) - f / (1.0 - gamma)) < 1e-10);
  }
}

TEST_CASE("pole on the denominator") {
  // γ=2, μ=1, L/ℓ=1: den(m) = 1 + (1-2m) tanh(σ/2)/σ with σ² = 1-2m² changes sign on (0.7, 2).
  const cplx gamma = 2.0;
  auto den = [&](double m) {
    const cplx s = std::sqrt(cplx(1.0 - 2 * m * m));
    return (1.0 + (1.0 - 2 * m) * std::tanh(0.5 * s) / s).real();
  };
  double lo = 0.7, hi = 2.0;
  REQUIRE(den(lo) > 0);
  REQUIRE(den(hi) < 0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (den(mid) > 0 ? lo : hi) = mid;
  }
  CHECK_THROWS_AS(qb_f(1.0, lo, gamma, 1.0), PoleHit);
  CHECK_NOTHROW(qb_f(1.0, 0.5, gamma, 1.0));
  CHECK_THROWS_AS(qb_solve(single_direction(1.0), 1.0, 1.0), DomainError);
}

TEST_CASE("quasiballistic approximation is best near the T=1 peak") {
  const auto set = slab_quadrature(2, 64, 0.5);
  ScanJob job;
  job.L_over_ell = 0.2;
  auto dev = [&](double T) {
    const SpectrumRow full = solve_point(T, set, job);
    const SpectrumRow qb = qb_point(T, set, 0.2, 1e-6, 0.5);
    REQUIRE(full.ok);
    REQUIRE(qb.ok);
    return std::abs(qb.rho / full.rho - 1);
  };
  const double far = dev(0.8), near = dev(0.95);
  CHECK(near < far);
  CHECK(near < 0.05);
}
