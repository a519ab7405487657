#pragma once

#include <vector>

#include "rft/dirset.hpp"
#include "rft/ray.hpp"

namespace rft {

struct Physics {
  double L_over_ell = 1.0;
  double eps_hat = 0.0;  // ε L / k
  cplx gamma_a = 0.0;
  cplx gamma_b = 0.0;
};

struct SolveSettings {
  double tol = 1e-10;  // on max|ΔQ̃| / max(1, max|Q̃|)
  int max_iter = 2000;
  double mixing = 1.0;
  bool auto_damp = true;  // drop mixing to 0.5 after a persistent residual increase
  int damp_patience = 5;
  double eta = 1e-6;
};

/// Q̃ and J̃∥ at the grid nodes (inner side of the contacts) plus the outer contact sides.
struct QField {
  std::vector<C2> Q, J;
  C2 Q_a_out = C2::Zero(), Q_b_out = C2::Zero();
  C2 J_a_out = C2::Zero(), J_b_out = C2::Zero();
  int iterations = 0;
  double mixing_used = 1.0;
  std::vector<double> residual_history;
};

/// Radiances for every direction of a set, both hemispheres.
struct RayField {
  std::vector<RaySamples> plus, minus;
};

QField update_fields(const RayField& rays, const DirectionSet& set);

/// One pass: integrate all rays in the frozen field Qnodes and return the new field.
QField sweep(const std::vector<C2>& Qnodes, const Physics& phys, const DirectionSet& set,
             const Grid& grid, RayField* keep = nullptr);

/// Self-consistent loop from Q̃ ≡ 0, or from `initial` when given (η continuation).
/// Throws NoConvergence with the residual history.
QField solve(const Physics& phys, const DirectionSet& set, const Grid& grid,
             const SolveSettings& settings, const std::vector<C2>* initial = nullptr);

struct InvariantReport {
  double trace_g = 0;         // max |tr g| over samples
  double g2 = 0;              // max entry of g² - I
  double trace_Q = 0;         // max |tr Q̃|, |tr J̃| over nodes
  double current_drift = 0;   // max consecutive-node |ΔJ̃| in the bulk over max |J̃|
  double contact_Q = 0;       // jump identities at x_a and x_b
  double contact_J = 0;
};

/// Re-integrates the rays in the field `qf` and measures the structural invariants.
InvariantReport measure_invariants(const Physics& phys, const DirectionSet& set, const Grid& grid,
                                   const QField& qf);

/// Largest entry of a - b over all nodes.
double max_diff(const std::vector<C2>& a, const std::vector<C2>& b);

}  // namespace rft
