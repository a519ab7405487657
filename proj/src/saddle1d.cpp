#include "rft/saddle1d.hpp"

#include <cmath>
#include <numbers>

namespace rft {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

C2 inv2(const C2& a) {
  const cplx d = det(a);
  const double scale = max_abs(a);
  if (!(std::abs(d) > 1e-13 * scale * scale)) throw SingularBlock("singular 2x2 pivot block");
  C2 out;
  out << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  return out / d;
}

int steps(double length, double h, const char* what) {
  const double n = length / h;
  const long r = std::lround(n);
  if (std::abs(n - r) > 1e-9 * std::max(1.0, n))
    throw DomainError(std::string("saddle1d: ") + what + " is not a whole number of grid steps");
  return static_cast<int>(r);
}

}  // namespace

Mesh1D make_mesh(const Profile1D& p) {
  if (!(p.ppw >= 20.0)) throw DomainError("saddle1d: need at least 20 points per wavelength");
  if (!(p.padding >= 2.0)) throw DomainError("saddle1d: padding must be at least 2 wavelengths");
  if (!(p.L > 0) || !(p.L_over_ell > 0)) throw DomainError("saddle1d: L and L/ell must be positive");
  if (p.varsigma < 0) throw DomainError("saddle1d: smoothing length must be >= 0");
  Mesh1D m;
  m.h = 1.0 / p.ppw;
  m.k = 2.0 * kPi;
  m.pinu = m.h / (2.0 * std::sin(m.k * m.h));
  const int npad = steps(p.padding, m.h, "padding");
  const int nL = steps(p.L, m.h, "L");
  m.j0 = npad;
  m.jb = npad + nL;
  const int n = nL + 2 * npad + 1;
  m.x.resize(n);
  m.profile.resize(n);
  m.obstacle.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double x = (j - npad) * m.h;
    m.x[j] = x;
    if (p.varsigma == 0.0) {
      m.profile[j] = (j > m.j0 && j < m.jb) ? 1.0 : (j == m.j0 || j == m.jb) ? 0.5 : 0.0;
    } else {
      m.profile[j] = 0.5 * (std::tanh(x / p.varsigma) - std::tanh((x - p.L) / p.varsigma));
    }
  }
  if (p.obstacle) {
    const auto& ob = *p.obstacle;
    const double x0 = ob.x0.value_or(0.5 * p.L);
    if (ob.sigma > 0) {
      const double amp = ob.gamma0 * m.k / (std::sqrt(2.0 * kPi) * ob.sigma);
      for (int j = 0; j < n; ++j) {
        const double u = (m.x[j] - x0) / ob.sigma;
        m.obstacle[j] = amp * std::exp(-0.5 * u * u);
      }
    } else {
      const int j = static_cast<int>(std::lround(x0 / m.h)) + npad;
      if (j < 0 || j >= n) throw DomainError("saddle1d: obstacle outside the mesh");
      m.obstacle[j] = ob.gamma0 * m.k / m.h;
    }
  }
  return m;
}

BlockTridiag assemble(const Profile1D& p, const Mesh1D& m, const std::vector<C2>& Qtilde) {
  const int n = static_cast<int>(m.x.size());
  if (static_cast<int>(Qtilde.size()) != n) throw DomainError("saddle1d: field size mismatch");
  const double h2 = m.h * m.h;
  // lattice dispersion: e^{ikx} solves the discrete free equation exactly
  const double kh2 = (2.0 - 2.0 * std::cos(m.k * m.h)) / h2;
  const double ell = p.L / p.L_over_ell;
  const double scat = 1.0 / (2.0 * ell * m.pinu);

  BlockTridiag A;
  A.diag.resize(n);
  A.lower.assign(n, C2::Identity() / h2);
  A.upper.assign(n, C2::Identity() / h2);
  A.lower[0].setZero();
  A.upper[n - 1].setZero();
  for (int j = 0; j < n; ++j) {
    A.diag[j] = (kh2 - 2.0 / h2 + m.obstacle[j]) * C2::Identity() +
                (I * scat * m.profile[j]) * Qtilde[j];
  }
  // outgoing closures: ghost = e^{+ikh} in the retarded row, e^{-ikh} in the advanced one
  const cplx out = std::exp(I * (m.k * m.h)) / h2;
  for (int j : {0, n - 1}) {
    A.diag[j](0, 0) += out;
    A.diag[j](1, 1) += std::conj(out);
  }
  // current-form contacts on the bonds just outside [0, L]
  const C2 lp = lambda_plus(), lm = lambda_minus();
  A.upper[m.j0 - 1] += (p.gamma_a * -I / h2) * lp;
  A.lower[m.j0] += (p.gamma_a * I / h2) * lp;
  A.upper[m.jb] += (p.gamma_b * -I / h2) * lm;
  A.lower[m.jb + 1] += (p.gamma_b * I / h2) * lm;
  return A;
}

std::vector<C2> inverse_diagonal(const BlockTridiag& A) {
  const int n = static_cast<int>(A.diag.size());
  std::vector<C2> left(n), right(n), out(n);
  left[0] = A.diag[0];
  for (int j = 1; j < n; ++j) left[j] = A.diag[j] - A.lower[j] * inv2(left[j - 1]) * A.upper[j - 1];
  right[n - 1] = A.diag[n - 1];
  for (int j = n - 2; j >= 0; --j)
    right[j] = A.diag[j] - A.upper[j] * inv2(right[j + 1]) * A.lower[j + 1];
  for (int j = 0; j < n; ++j) out[j] = inv2(left[j] + right[j] - A.diag[j]);
  return out;
}

std::vector<C2> green_diag(const Profile1D& p, const Mesh1D& m, const std::vector<C2>& Qtilde) {
  auto d = inverse_diagonal(assemble(p, m, Qtilde));
  const cplx f = I / (m.h * m.pinu);
  for (auto& b : d) b *= f;
  return d;
}

Field1D solve_1d(const Profile1D& p, double tol, int max_iter, double mixing) {
  Field1D out;
  out.mesh = make_mesh(p);
  std::vector<C2> Q(out.mesh.x.size(), C2::Zero());
  for (int it = 1; it <= max_iter; ++it) {
    auto next = green_diag(p, out.mesh, Q);
    double res = 0;
    for (std::size_t j = 0; j < Q.size(); ++j) res = std::max(res, max_abs(next[j] - Q[j]));
    if (!std::isfinite(res)) throw NonFinite("saddle1d: residual is not finite");
    out.residual_history.push_back(res);
    for (std::size_t j = 0; j < Q.size(); ++j) Q[j] = (1.0 - mixing) * Q[j] + mixing * next[j];
    if (res < tol) {
      out.Qtilde = std::move(next);
      out.iterations = it;
      out.oscillation_metric = oscillation_metric(out.mesh, out.Qtilde, p.L);
      return out;
    }
  }
  throw NoConvergence("saddle1d: iteration did not converge", out.residual_history);
}

double oscillation_metric(const Mesh1D& m, const std::vector<C2>& Qtilde, double L) {
  std::vector<double> xs;
  std::vector<cplx> ys;
  for (std::size_t j = 0; j < m.x.size(); ++j) {
    if (m.x[j] >= 0.1 * L - 1e-12 && m.x[j] <= 0.9 * L + 1e-12) {
      xs.push_back(m.x[j]);
      ys.push_back(Qtilde[j](0, 0));
    }
  }
  const int M = static_cast<int>(xs.size());
  if (M < 4) throw DomainError("oscillation_metric: window too short");

  // least-squares line through the complex samples
  Eigen::MatrixXd X(M, 2);
  Eigen::MatrixXcd Y(M, 1);
  for (int i = 0; i < M; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = xs[i];
    Y(i, 0) = ys[i];
  }
  const Eigen::MatrixXcd coef = X.cast<cplx>().colPivHouseholderQr().solve(Y);
  std::vector<cplx> z(M);
  for (int i = 0; i < M; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (M - 1)));
    z[i] = w * (ys[i] - coef(0, 0) - coef(1, 0) * xs[i]);
  }
  double high = 0, total = 0;
  for (int f = 1; f < M; ++f) {
    cplx F = 0.0;
    for (int i = 0; i < M; ++i) F += z[i] * std::exp(-I * (2.0 * kPi * f * i / M));
    const int fs = f <= M / 2 ? f : f - M;
    const double kappa = std::abs(2.0 * kPi * fs / (M * m.h));
    const double e = std::norm(F);
    total += e;
    if (kappa >= m.k) high += e;
  }
  return total > 0 ? high / total : 0.0;
}

}  // namespace rft
