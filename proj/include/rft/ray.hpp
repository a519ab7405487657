#pragma once

#include <vector>

#include "rft/mat2.hpp"

namespace rft {

/// Uniform mesh x_j = j/N on [0,1] (lengths in units of L). Contacts at j=0 and j=N.
struct Grid {
  int N = 1024;
  double dx() const { return 1.0 / N; }
  double x(int j) const { return double(j) / N; }
  int nodes() const { return N + 1; }
};

enum class Contact { A, B };
enum class Sign { Plus, Minus };

/// g samples along one ray: inner side at nodes 0..N, plus the outer sides 0⁻ and L⁺.
struct RaySamples {
  std::vector<C2> node;
  C2 outer_a;  // x_a⁻
  C2 outer_b;  // x_b⁺
};

/// P = -(L/ℓ)/(2μ) Q̃ - ε̂/(2μ) Λ3 in units of L, without the contact deltas.
C2 bulk_generator(cplx mu, const C2& Qtilde, double L_over_ell, double eps_hat = 0.0);

/// Applies e^{iγΛ+} (A) or e^{iγΛ-} (B); pass -γ for the inverse jump.
V2 contact_jump(const V2& v, Contact which, cplx gamma);

/// g = M Λ3 M⁻¹ with M = [b a]; equivalent to the α = -a1/a2, β = b2/b1 form.
C2 radiance_from_vectors(const V2& a, const V2& b);

/// Cell-wise bulk data shared by every direction: R_j = (L/ℓ) Q̃_mid + ε̂ Λ3 and r_j = √(-det R_j).
class RayIntegrator {
 public:
  RayIntegrator(const Grid& grid, const std::vector<C2>& Qnodes, double L_over_ell,
                double eps_hat, cplx gamma_a, cplx gamma_b);

  /// Integrates both signs of direction μ; either output may be null.
  void integrate(cplx mu, RaySamples* plus, RaySamples* minus) const;
  RaySamples integrate(cplx mu, Sign sign) const;

  const Grid& grid() const { return grid_; }

 private:
  void propagators(cplx mu, std::vector<cplx>& c, std::vector<cplx>& s) const;

  Grid grid_;
  std::vector<C2> R_;
  std::vector<cplx> r_;
  cplx ga_, gb_;
};

/// Convenience wrapper around RayIntegrator for a single direction and sign.
RaySamples integrate_ray(cplx mu, Sign sign, const std::vector<C2>& Qnodes, const Grid& grid,
                         double L_over_ell, cplx gamma_a, cplx gamma_b, double eps_hat = 0.0);

}  // namespace rft
