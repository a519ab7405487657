#pragma once

// 2x2 complex matrix kernel in the duplicated (retarded/advanced) space.

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "rft/errors.hpp"

namespace rft {

template <typename Real>
using C2T = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real>
using V2T = Eigen::Matrix<std::complex<Real>, 2, 1>;

using cplx = std::complex<double>;
using C2 = C2T<double>;
using V2 = V2T<double>;

template <typename Real = double>
C2T<Real> lambda3() {
  C2T<Real> m;
  m << Real(1), Real(0), Real(0), Real(-1);
  return m;
}

template <typename Real = double>
C2T<Real> lambda_plus() {
  C2T<Real> m;
  m << Real(0), Real(1), Real(0), Real(0);
  return m;
}

template <typename Real = double>
C2T<Real> lambda_minus() {
  C2T<Real> m;
  m << Real(0), Real(0), Real(1), Real(0);
  return m;
}

template <typename Derived1, typename Derived2>
auto commutator(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  using Scalar = typename Derived1::Scalar;
  Eigen::Matrix<Scalar, 2, 2> out = a * b - b * a;
  return out;
}

template <typename Derived>
typename Derived::Scalar trace(const Eigen::MatrixBase<Derived>& a) {
  return a(0, 0) + a(1, 1);
}

template <typename Derived>
typename Derived::Scalar det(const Eigen::MatrixBase<Derived>& a) {
  return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
}

/// Largest entry magnitude.
template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const auto z = a(i);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

namespace detail {

inline constexpr double kSeriesThreshold = 1e-4;

/// cosh(s) and sinh(s)/s for complex s, with a Taylor branch near zero.
template <typename Real>
void cosh_sinhc(std::complex<Real> s, std::complex<Real>& ch, std::complex<Real>& shc,
                double threshold = kSeriesThreshold) {
  if (std::abs(s) < threshold) {
    const std::complex<Real> s2 = s * s;
    ch = Real(1) + s2 / Real(2) + s2 * s2 / Real(24);
    shc = Real(1) + s2 / Real(6) + s2 * s2 / Real(120);
    return;
  }
  // cosh(x+iy) = cosh x cos y + i sinh x sin y, sinh(x+iy) = sinh x cos y + i cosh x sin y
  const Real x = s.real();
  const Real y = s.imag();
  const Real chx = std::cosh(x), shx = std::sinh(x);
  const Real cy = std::cos(y), sy = std::sin(y);
  ch = {chx * cy, shx * sy};
  shc = std::complex<Real>(shx * cy, chx * sy) / s;
}

}  // namespace detail

/// exp(A) for traceless A: cosh(s) I + sinh(s)/s A with s^2 = A11^2 + A12 A21.
/// Either root of s^2 gives the same result, so the principal branch is used.
template <typename Real>
C2T<Real> exp_traceless_unchecked(const C2T<Real>& a) {
  const std::complex<Real> s = std::sqrt(a(0, 0) * a(0, 0) + a(0, 1) * a(1, 0));
  std::complex<Real> ch, shc;
  detail::cosh_sinhc(s, ch, shc);
  C2T<Real> out = shc * a;
  out(0, 0) += ch;
  out(1, 1) += ch;
  return out;
}

template <typename Real>
C2T<Real> exp_traceless(const C2T<Real>& a) {
  const Real scale = max_abs(a);
  if (std::abs(trace(a)) > Real(1e-12) * scale) {
    throw NonTraceless("exp_traceless: generator has nonzero trace");
  }
  return exp_traceless_unchecked(a);
}

/// Matrix sign function by eigendecomposition, sign(A) = U sign(D) U^-1.
template <typename Real>
C2T<Real> msign(const C2T<Real>& a) {
  Eigen::ComplexEigenSolver<C2T<Real>> es(a, true);
  if (es.info() != Eigen::Success) throw DefectiveMatrix("msign: eigen-solve failed");
  const C2T<Real> u = es.eigenvectors();
  Eigen::JacobiSVD<C2T<Real>> svd(u);
  const auto sv = svd.singularValues();
  if (!(sv(1) > Real(0)) || sv(0) / sv(1) > Real(1e12)) {
    throw DefectiveMatrix("msign: eigenvector matrix is numerically singular");
  }
  C2T<Real> d = C2T<Real>::Zero();
  for (int i = 0; i < 2; ++i) {
    const Real re = es.eigenvalues()(i).real();
    if (re == Real(0)) throw DomainError("msign: eigenvalue on the imaginary axis");
    d(i, i) = re > Real(0) ? Real(1) : Real(-1);
  }
  return u * d * u.inverse();
}

/// Similarity transform e^{c L} X e^{-c L} for nilpotent L (L^2 = 0).
template <typename Real>
C2T<Real> nilpotent_conjugate(const C2T<Real>& x, const C2T<Real>& nil, std::complex<Real> c) {
  C2T<Real> e = C2T<Real>::Identity() + c * nil;
  C2T<Real> ei = C2T<Real>::Identity() - c * nil;
  return e * x * ei;
}

}  // namespace rft
