#include "rft/ray.hpp"

namespace rft {

namespace {

const cplx I(0.0, 1.0);

inline double inf_norm(const V2& v) {
  return std::max({std::abs(v(0).real()), std::abs(v(0).imag()), std::abs(v(1).real()),
                   std::abs(v(1).imag())});
}

inline void renormalize(V2& v) {
  const double m = inf_norm(v);
  if (!(m > 0.0) || !std::isfinite(m)) throw NonFinite("ray vector vanished or overflowed");
  v /= m;
}

// (c I + s R) v
inline V2 apply(cplx c, cplx s, const C2& R, const V2& v) {
  V2 out;
  out(0) = c * v(0) + s * (R(0, 0) * v(0) + R(0, 1) * v(1));
  out(1) = c * v(1) + s * (R(1, 0) * v(0) + R(1, 1) * v(1));
  return out;
}

}  // namespace

C2 bulk_generator(cplx mu, const C2& Qtilde, double L_over_ell, double eps_hat) {
  const cplx f = -1.0 / (2.0 * mu);
  return f * (L_over_ell * Qtilde + eps_hat * lambda3());
}

V2 contact_jump(const V2& v, Contact which, cplx gamma) {
  V2 out = v;
  if (which == Contact::A)
    out(0) += I * gamma * v(1);
  else
    out(1) += I * gamma * v(0);
  return out;
}

C2 radiance_from_vectors(const V2& a, const V2& b) {
  const cplx det = b(0) * a(1) - a(0) * b(1);
  const double scale = inf_norm(a) * inf_norm(b);
  if (!(std::abs(det) >= 1e-14 * scale)) throw ParamBlowup("Riccati pole on a sample");
  const cplx inv = 1.0 / det;
  const cplx d = (b(0) * a(1) + a(0) * b(1)) * inv;
  C2 g;
  g << d, -2.0 * a(0) * b(0) * inv, 2.0 * a(1) * b(1) * inv, -d;
  return g;
}

RayIntegrator::RayIntegrator(const Grid& grid, const std::vector<C2>& Qnodes, double L_over_ell,
                             double eps_hat, cplx gamma_a, cplx gamma_b)
    : grid_(grid), ga_(gamma_a), gb_(gamma_b) {
  if (grid.N < 2) throw DomainError("grid needs at least 2 cells");
  if (static_cast<int>(Qnodes.size()) != grid.nodes())
    throw DomainError("Q field does not match the grid");
  R_.resize(grid.N);
  r_.resize(grid.N);
  const C2 l3 = lambda3();
  for (int j = 0; j < grid.N; ++j) {
    R_[j] = L_over_ell * 0.5 * (Qnodes[j] + Qnodes[j + 1]) + eps_hat * l3;
    r_[j] = std::sqrt(R_[j](0, 0) * R_[j](0, 0) + R_[j](0, 1) * R_[j](1, 0));
  }
}

void RayIntegrator::propagators(cplx mu, std::vector<cplx>& c, std::vector<cplx>& s) const {
  if (mu == 0.0) throw DomainError("direction cosine must be nonzero");
  const cplx h = grid_.dx() / (2.0 * mu);
  c.resize(grid_.N);
  s.resize(grid_.N);
  for (int j = 0; j < grid_.N; ++j) {
    cplx shc;
    detail::cosh_sinhc(h * r_[j], c[j], shc);
    s[j] = -h * shc;
  }
}

void RayIntegrator::integrate(cplx mu, RaySamples* plus, RaySamples* minus) const {
  std::vector<cplx> c, s;
  propagators(mu, c, s);
  const int N = grid_.N;
  std::vector<V2> a(N + 3), b(N + 3);
  const V2 e1(1.0, 0.0), e2(0.0, 1.0);

  // Storage: 0 = x_a⁻, 1..N+1 = nodes 0..N, N+2 = x_b⁺. The a vectors always use E = e^{P⁺Δx}
  // and b vectors E⁻¹, because P⁻ = -P⁺ and the two travel opposite ways.
  auto forward = [&](std::vector<V2>& out, V2 v, double sgn) {
    out[0] = v;
    v = contact_jump(v, Contact::A, ga_);
    out[1] = v;
    for (int j = 0; j < N; ++j) {
      v = apply(c[j], sgn * s[j], R_[j], v);
      renormalize(v);
      out[j + 2] = v;
    }
    out[N + 2] = contact_jump(v, Contact::B, gb_);
  };
  auto backward = [&](std::vector<V2>& out, V2 v, double sgn) {
    out[N + 2] = v;
    v = contact_jump(v, Contact::B, -gb_);
    out[N + 1] = v;
    for (int j = N - 1; j >= 0; --j) {
      v = apply(c[j], sgn * s[j], R_[j], v);
      renormalize(v);
      out[j + 1] = v;
    }
    out[0] = contact_jump(v, Contact::A, -ga_);
  };
  auto assemble = [&](RaySamples& rs) {
    rs.node.resize(N + 1);
    rs.outer_a = radiance_from_vectors(a[0], b[0]);
    for (int j = 0; j <= N; ++j) rs.node[j] = radiance_from_vectors(a[j + 1], b[j + 1]);
    rs.outer_b = radiance_from_vectors(a[N + 2], b[N + 2]);
  };

  if (plus) {
    forward(a, e2, +1.0);
    backward(b, e1, -1.0);
    assemble(*plus);
  }
  if (minus) {
    backward(a, e2, +1.0);
    forward(b, e1, -1.0);
    assemble(*minus);
  }
}

RaySamples RayIntegrator::integrate(cplx mu, Sign sign) const {
  RaySamples rs;
  if (sign == Sign::Plus)
    integrate(mu, &rs, nullptr);
  else
    integrate(mu, nullptr, &rs);
  return rs;
}

RaySamples integrate_ray(cplx mu, Sign sign, const std::vector<C2>& Qnodes, const Grid& grid,
                         double L_over_ell, cplx gamma_a, cplx gamma_b, double eps_hat) {
  RayIntegrator ri(grid, Qnodes, L_over_ell, eps_hat, gamma_a, gamma_b);
  return ri.integrate(mu, sign);
}

}  // namespace rft
