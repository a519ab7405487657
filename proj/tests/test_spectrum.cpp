#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rft/spectrum.hpp"

using namespace rft;

TEST_CASE("rho_at examples") {
  const double pi = std::numbers::pi;
  CHECK(rho_at(0.25, cplx(0.0, pi * 0.0625)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho_at(0.7, cplx(-3.2, 0.0)) == 0.0);
  CHECK_THROWS_AS(rho_at(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(rho_at(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(rho_at(-0.5, 1.0), DomainError);
}

TEST_CASE("default T grid") {
  const auto T = clustered_T_grid();
  REQUIRE(T.size() == 199);
  CHECK(T.front() == doctest::Approx(1 - std::pow(0.999, 3)).epsilon(1e-14));
  CHECK(T.back() == doctest::Approx(1 - std::pow(0.001, 3)).epsilon(1e-14));
  for (std::size_t m = 1; m < T.size(); ++m) CHECK(T[m] > T[m - 1]);
  CHECK_THROWS_AS(clustered_T_grid(1), DomainError);
  CHECK_THROWS_AS(clustered_T_grid(10, 3, 0.5, 0.2), DomainError);
}

TEST_CASE("ballistic generating function") {
  const auto set = waveguide_modes(2, 5.5);
  ScanJob job;
  job.L_over_ell = 0.0;
  job.grid.N = 64;
  for (Convention c : {Convention::AOnly, Convention::Sqrt}) {
    job.convention = c;
    const SpectrumRow r = solve_point(0.6, set, job);
    REQUIRE(r.ok);
    CHECK(std::abs(r.F - 1.0 / (1.0 - r.gamma)) < 1e-12);
  }
  // all weight sits in the T=1 peak
  const SpectrumTable t = scan({0.5}, set, job);
  CHECK(std::abs(t.rows[0].rho) < 1e-5);
}

TEST_CASE("conventions agree") {
  const auto set = waveguide_modes(2, 25.5);
  ScanJob job;
  job.L_over_ell = 0.5;
  const SpectrumRow a = solve_point(0.7, set, job);
  job.convention = Convention::AOnly;
  const SpectrumRow b = solve_point(0.7, set, job);
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  CHECK(std::abs(a.F - b.F) <= 1e-4);
  CHECK(a.rho > 0);
}

TEST_CASE("real gamma below one gives a real generating function") {
  const auto set = waveguide_modes(2, 5.5);
  Grid g;
  g.N = 256;
  for (Convention c : {Convention::AOnly, Convention::Sqrt}) {
    const cplx gamma = 0.5;
    const auto [ga, gb] = contact_gammas(gamma, c);
    const QField qf = solve({0.5, 0.0, ga, gb}, set, g, SolveSettings{});
    CHECK(std::abs(gen_fun(qf, gamma, c).imag()) < 1e-10);
  }
}

TEST_CASE("halving eta barely moves the smooth part of rho") {
  const auto set = waveguide_modes(2, 25.5);
  ScanJob job;
  job.L_over_ell = 1.0;
  const SpectrumRow a = solve_point(0.6, set, job);
  job.settings.eta *= 0.5;
  const SpectrumRow b = solve_point(0.6, set, job);
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  CHECK(std::abs(b.rho / a.rho - 1) < 0.01);
}

TEST_CASE("advanced-branch points are recovered by eta continuation") {
  // A slab point where the start from Q̃ ≡ 0 lands on Im F < 0; its neighbours do not.
  const auto set = slab_quadrature(2, 64, 0.5);
  ScanJob job;
  job.L_over_ell = 0.2;
  const SpectrumRow bad = solve_point(0.9091202342, set, job);
  const SpectrumRow left = solve_point(0.90602929, set, job);
  const SpectrumRow right = solve_point(0.923562316, set, job);
  REQUIRE(bad.ok);
  CHECK(bad.continuation);
  CHECK_FALSE(left.continuation);
  CHECK(bad.rho > left.rho);
  CHECK(bad.rho < right.rho);
}

TEST_CASE("scan records failures in place and is thread-count independent") {
  const auto set = waveguide_modes(2, 5.5);
  ScanJob job;
  job.L_over_ell = 1.0;
  job.grid.N = 128;
  const std::vector<double> T = {0.2, 0.5, 0.8, 0.95};
  const SpectrumTable one = scan(T, set, job, 1);
  const SpectrumTable four = scan(T, set, job, 4);
  REQUIRE(one.rows.size() == T.size());
  for (std::size_t m = 0; m < T.size(); ++m) {
    CHECK(one.rows[m].T == T[m]);
    CHECK(one.rows[m].F == four.rows[m].F);
  }
  CHECK(one.failures() == 0);

  const SpectrumRow outside = solve_point(1.5, set, job);
  CHECK_FALSE(outside.ok);
  CHECK(outside.error.rfind("DomainError", 0) == 0);
  CHECK(std::isnan(outside.rho));

  job.settings.max_iter = 2;
  job.settings.eta = 1e-1;  // no continuation fallback above 1e-2
  const SpectrumTable capped = scan({0.5}, set, job);
  CHECK(capped.failures() == 1);
  CHECK(capped.rows[0].error.rfind("NoConvergence", 0) == 0);

  CHECK_THROWS_AS(scan({0.5, 0.4}, set, job), DomainError);
}

TEST_CASE("table integrals") {
  SpectrumTable t;
  for (double T : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    SpectrumRow r;
    r.T = T;
    r.rho = 2 * T;
    r.ok = true;
    t.rows.push_back(r);
  }
  CHECK(t.norm() == doctest::Approx(0.9 * 0.9 - 0.1 * 0.1));
  CHECK(t.rho_interp(0.4) == doctest::Approx(0.8));
  CHECK(std::isnan(t.rho_interp(0.95)));
  t.rows[2].ok = false;  // skipped rows bridge linearly
  CHECK(t.norm() == doctest::Approx(0.8));
}
