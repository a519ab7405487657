#include "rft/quasiballistic.hpp"

namespace rft {

namespace {

cplx sigma_of(cplx m, cplx gamma) { return std::sqrt(1.0 + gamma / (1.0 - gamma) * m * m); }

// tanh(βσ)/σ with the σ → 0 limit β
cplx tanhc(cplx beta, cplx sigma) {
  if (std::abs(sigma) < 1e-8) return beta;
  return std::tanh(beta * sigma) / sigma;
}

cplx f_given(cplx mu, cplx m, cplx sigma, cplx gamma, double L_over_ell) {
  const cplx t = tanhc(0.5 * L_over_ell / mu, sigma);
  const cplx den = 1.0 + (1.0 + gamma / (1.0 - gamma) * m) * t;
  if (std::abs(den) < 1e-14) throw PoleHit("quasiballistic denominator vanishes");
  return (1.0 - (1.0 - m) * t) / den;
}

}  // namespace

cplx qb_f(cplx mu, cplx m, cplx gamma, double L_over_ell) {
  return f_given(mu, m, sigma_of(m, gamma), gamma, L_over_ell);
}

QbState qb_solve(const DirectionSet& set, double L_over_ell, cplx gamma, double damping,
                 double tol, int max_iter) {
  if (gamma == 1.0) throw DomainError("qb_solve: gamma = 1 is singular");
  if (!(damping > 0 && damping <= 1)) throw DomainError("qb_solve: damping must be in (0,1]");
  QbState st;
  st.gamma = gamma;
  st.L_over_ell = L_over_ell;
  st.f.assign(set.size(), 1.0);
  cplx m = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    const cplx sigma = sigma_of(m, gamma);
    cplx mean = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      st.f[i] = f_given(set.directions[i].mu, m, sigma, gamma, L_over_ell);
      mean += set.weight[0][i] * st.f[i];
    }
    if (!std::isfinite(mean.real()) || !std::isfinite(mean.imag()))
      throw NonFinite("qb_solve: mean is not finite");
    const cplx delta = mean - m;
    m += damping * delta;
    if (std::abs(delta) < tol) {
      // final pass so that f, m and σ are mutually consistent
      st.mean_f = m;
      st.sigma = sigma_of(m, gamma);
      for (std::size_t i = 0; i < set.size(); ++i)
        st.f[i] = f_given(set.directions[i].mu, m, st.sigma, gamma, L_over_ell);
      st.iterations = it;
      return st;
    }
  }
  throw NoConvergence("qb_solve: fixed point not reached", {});
}

cplx qb_gen_fun(const QbState& state, const DirectionSet& set) {
  cplx mean = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) mean += set.weight[1][i] * state.f[i];
  return mean / (1.0 - state.gamma);
}

}  // namespace rft
