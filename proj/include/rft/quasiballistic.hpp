#pragma once

#include <vector>

#include "rft/dirset.hpp"

namespace rft {

/// Uniform-field solution: f per direction, m = ⟨f⟩₀⁺ and σ² = 1 + γ/(1-γ) m².
struct QbState {
  std::vector<cplx> f;
  cplx mean_f = 1.0;
  cplx sigma = 1.0;
  cplx gamma = 0.0;
  double L_over_ell = 0.0;
  int iterations = 0;
};

/// f(μ) for a given mean m; throws PoleHit on a vanishing denominator.
cplx qb_f(cplx mu, cplx m, cplx gamma, double L_over_ell);

QbState qb_solve(const DirectionSet& set, double L_over_ell, cplx gamma, double damping = 0.5,
                 double tol = 1e-12, int max_iter = 100000);

/// F = ⟨f⟩₁⁺ / (1-γ).
cplx qb_gen_fun(const QbState& state, const DirectionSet& set);

}  // namespace rft
