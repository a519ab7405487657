#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "rft/errors.hpp"
#include "rft/saddle1d.hpp"

using namespace rft;

namespace {

const cplx I(0.0, 1.0);

Eigen::MatrixXcd dense(const BlockTridiag& A) {
  const int n = static_cast<int>(A.diag.size());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    M.block<2, 2>(2 * j, 2 * j) = A.diag[j];
    if (j > 0) M.block<2, 2>(2 * j, 2 * j - 2) = A.lower[j];
    if (j + 1 < n) M.block<2, 2>(2 * j, 2 * j + 2) = A.upper[j];
  }
  return M;
}

double max_trace(const Field1D& f) {
  double t = 0;
  for (const auto& q : f.Qtilde) t = std::max(t, std::abs(trace(q)));
  return t;
}

// mean trace over the central third of [0, L]
cplx central_trace(const Field1D& f, double L) {
  cplx s = 0.0;
  int n = 0;
  for (std::size_t j = 0; j < f.Qtilde.size(); ++j)
    if (f.mesh.x[j] > L / 3 && f.mesh.x[j] < 2 * L / 3) {
      s += trace(f.Qtilde[j]);
      ++n;
    }
  return s / double(n);
}

double contact_error(const Field1D& f, cplx gamma, int off) {
  const auto& m = f.mesh;
  const double ea = max_abs(nilpotent_conjugate(f.Qtilde[m.j0 - off], lambda_plus(), I * gamma) -
                            f.Qtilde[m.j0 + off]);
  const double eb = max_abs(nilpotent_conjugate(f.Qtilde[m.jb - off], lambda_minus(), I * gamma) -
                            f.Qtilde[m.jb + off]);
  return std::max(ea, eb);
}

}  // namespace

TEST_CASE("mesh layout") {
  Profile1D p;
  p.L = 3.0;
  const Mesh1D m = make_mesh(p);
  CHECK(m.h == doctest::Approx(0.05));
  CHECK(m.x.size() == 60 + 2 * 40 + 1);
  CHECK(m.x[m.j0] == doctest::Approx(0.0));
  CHECK(m.x[m.jb] == doctest::Approx(3.0));
  CHECK(m.profile[m.j0] == 0.5);
  CHECK(m.profile[m.j0 + 1] == 1.0);
  CHECK(m.profile[0] == 0.0);

  p.ppw = 10;
  CHECK_THROWS_AS(make_mesh(p), DomainError);
  p.ppw = 20;
  p.padding = 1;
  CHECK_THROWS_AS(make_mesh(p), DomainError);
  p.padding = 2;
  p.L = 3.01;
  CHECK_THROWS_AS(make_mesh(p), DomainError);
}

TEST_CASE("free lattice Green function gives Lambda3") {
  Profile1D p;
  p.L = 4.0;
  p.L_over_ell = 1e-12;  // disorder coupling vanishes
  const Mesh1D m = make_mesh(p);
  const std::vector<C2> zero(m.x.size(), C2::Zero());
  for (const auto& q : green_diag(p, m, zero)) CHECK(max_abs(q - lambda3()) < 1e-9);
}

TEST_CASE("block recursion matches a dense LU inverse") {
  Profile1D p;
  p.L = 6.0;
  p.padding = 2.0;
  p.L_over_ell = 3.0;
  p.gamma_a = cplx(1.3, 1e-3);
  p.gamma_b = cplx(0.7, 2e-3);
  p.obstacle = Obstacle{0.8, 0.3, 2.5};
  const Mesh1D m = make_mesh(p);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<C2> Q(m.x.size());
  for (auto& q : Q) q << cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)),
                  cplx(u(rng), u(rng));
  const BlockTridiag A = assemble(p, m, Q);
  const Eigen::MatrixXcd inv = dense(A).partialPivLu().inverse();
  const auto d = inverse_diagonal(A);
  double err = 0, scale = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    err = std::max(err, max_abs(d[j] - C2(inv.block<2, 2>(2 * j, 2 * j))));
    scale = std::max(scale, max_abs(d[j]));
  }
  CHECK(err <= 1e-10 * scale);

  // A -> A/2 doubles the inverse
  BlockTridiag half = A;
  for (auto* v : {&half.lower, &half.diag, &half.upper})
    for (auto& b : *v) b *= 0.5;
  const auto d2 = inverse_diagonal(half);
  for (std::size_t j = 0; j < d.size(); ++j) CHECK(max_abs(d2[j] - 2.0 * d[j]) <= 1e-10 * scale);
}

TEST_CASE("singular pivot block") {
  BlockTridiag A;
  A.diag.assign(3, C2::Zero());
  A.lower.assign(3, C2::Zero());
  A.upper.assign(3, C2::Zero());
  CHECK_THROWS_AS(inverse_diagonal(A), SingularBlock);
}

TEST_CASE("trace vanishes without disorder") {
  Profile1D p;
  p.L_over_ell = 1e-9;
  CHECK(max_trace(solve_1d(p)) <= 1e-8);
  p.gamma_a = p.gamma_b = cplx(1.2, 1e-5);
  CHECK(max_trace(solve_1d(p)) <= 1e-8);
}

TEST_CASE("disorder trace scales as 1/(k ell)") {
  Profile1D p;
  p.varsigma = 0.4;
  p.L_over_ell = 5.0;
  const cplx t5 = central_trace(solve_1d(p), p.L);
  p.L_over_ell = 1.0;
  const cplx t1 = central_trace(solve_1d(p), p.L);
  CHECK(std::abs(t5 / t1 - 5.0) < 0.1);
  const double kell = 2 * std::numbers::pi * p.L / 5.0;
  CHECK(std::abs(t5) * kell > 0.9);
  CHECK(std::abs(t5) * kell < 1.05);
  CHECK(t5.imag() < 0);
}

TEST_CASE("contact conjugation holds to first order in h") {
  const cplx g(1.2, 1e-5);
  Profile1D p;
  p.gamma_a = p.gamma_b = g;
  p.varsigma = 0.4;
  const Field1D coarse = solve_1d(p);
  p.ppw = 40;
  const Field1D fine = solve_1d(p);
  const double e20 = contact_error(coarse, g, 1), e40 = contact_error(fine, g, 1);
  CHECK(e20 <= 0.02);
  CHECK(e40 / e20 == doctest::Approx(0.5).epsilon(0.1));

  double d = 0, s = 0;
  for (std::size_t j = 0; j < coarse.Qtilde.size(); ++j) {
    d = std::max(d, max_abs(coarse.Qtilde[j] - fine.Qtilde[2 * j]));
    s = std::max(s, max_abs(coarse.Qtilde[j]));
  }
  CHECK(d / s < 0.01);
}

TEST_CASE("sharp features oscillate at the wavelength scale") {
  Profile1D p;
  p.gamma_a = p.gamma_b = cplx(1.2, 1e-5);
  const double sharp = solve_1d(p).oscillation_metric;
  p.varsigma = 0.4;
  const double smooth = solve_1d(p).oscillation_metric;
  CHECK(sharp >= 5 * smooth);

  p.obstacle = Obstacle{1.0, 0.0, std::nullopt};
  const double point = solve_1d(p).oscillation_metric;
  p.obstacle->sigma = 0.4;
  const double wide = solve_1d(p).oscillation_metric;
  CHECK(point > 3 * wide);
}

TEST_CASE("solve_1d history and failure") {
  Profile1D p;
  p.L = 5.0;
  const Field1D f = solve_1d(p);
  CHECK(f.residual_history.size() == static_cast<std::size_t>(f.iterations));
  CHECK(f.residual_history.back() < 1e-10);
  CHECK_THROWS_AS(solve_1d(p, 1e-10, 2), NoConvergence);
}
