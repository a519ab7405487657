#include "rft/sc.hpp"

#include <limits>

namespace rft {

double max_diff(const std::vector<C2>& a, const std::vector<C2>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, max_abs(a[j] - b[j]));
  return m;
}

namespace {

struct Accumulator {
  QField f;
  explicit Accumulator(int nodes) {
    f.Q.assign(nodes, C2::Zero());
    f.J.assign(nodes, C2::Zero());
  }
  void add(const RaySamples& gp, const RaySamples& gm, cplx w0, cplx w1) {
    const cplx h0 = 0.5 * w0, h1 = 0.5 * w1;
    for (std::size_t j = 0; j < f.Q.size(); ++j) {
      f.Q[j] += h0 * (gp.node[j] + gm.node[j]);
      f.J[j] += h1 * (gp.node[j] - gm.node[j]);
    }
    f.Q_a_out += h0 * (gp.outer_a + gm.outer_a);
    f.Q_b_out += h0 * (gp.outer_b + gm.outer_b);
    f.J_a_out += h1 * (gp.outer_a - gm.outer_a);
    f.J_b_out += h1 * (gp.outer_b - gm.outer_b);
  }
};

}  // namespace

QField update_fields(const RayField& rays, const DirectionSet& set) {
  if (rays.plus.size() != set.size() || rays.minus.size() != set.size())
    throw DomainError("update_fields: ray field does not match the direction set");
  Accumulator acc(static_cast<int>(rays.plus.front().node.size()));
  for (std::size_t i = 0; i < set.size(); ++i)
    acc.add(rays.plus[i], rays.minus[i], set.weight[0][i], set.weight[1][i]);
  return std::move(acc.f);
}

QField sweep(const std::vector<C2>& Qnodes, const Physics& phys, const DirectionSet& set,
             const Grid& grid, RayField* keep) {
  RayIntegrator ri(grid, Qnodes, phys.L_over_ell, phys.eps_hat, phys.gamma_a, phys.gamma_b);
  Accumulator acc(grid.nodes());
  RaySamples gp, gm;
  if (keep) {
    keep->plus.resize(set.size());
    keep->minus.resize(set.size());
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    ri.integrate(set.directions[i].mu, &gp, &gm);
    acc.add(gp, gm, set.weight[0][i], set.weight[1][i]);
    if (keep) {
      keep->plus[i] = gp;
      keep->minus[i] = gm;
    }
  }
  return std::move(acc.f);
}

QField solve(const Physics& phys, const DirectionSet& set, const Grid& grid,
             const SolveSettings& settings, const std::vector<C2>* initial) {
  if (!(settings.tol > 0)) throw DomainError("tol must be positive");
  if (!(settings.mixing > 0 && settings.mixing <= 1)) throw DomainError("mixing must be in (0,1]");

  if (initial && static_cast<int>(initial->size()) != grid.nodes())
    throw DomainError("initial field does not match the grid");
  std::vector<C2> Q = initial ? *initial : std::vector<C2>(grid.nodes(), C2::Zero());
  std::vector<double> history;
  double mixing = settings.mixing;
  double best = std::numeric_limits<double>::infinity();
  int above_best = 0;

  for (int it = 1; it <= settings.max_iter; ++it) {
    QField next = sweep(Q, phys, set, grid);
    // relative to the field scale once entries exceed 1 (off-diagonals grow like 1/|1-γ|)
    double scale = 1.0;
    for (const auto& q : next.Q) scale = std::max(scale, max_abs(q));
    const double res = max_diff(next.Q, Q) / scale;
    if (!std::isfinite(res)) throw NonFinite("self-consistent residual is not finite");
    history.push_back(res);
    if (res < settings.tol) {
      next.iterations = it;
      next.mixing_used = mixing;
      next.residual_history = std::move(history);
      return next;
    }
    if (res < best) {
      best = res;
      above_best = 0;
    } else if (settings.auto_damp && mixing > 0.5 && ++above_best >= settings.damp_patience) {
      mixing = 0.5;
      above_best = 0;
    }
    if (mixing == 1.0) {
      Q = std::move(next.Q);
    } else {
      for (std::size_t j = 0; j < Q.size(); ++j) Q[j] = (1.0 - mixing) * Q[j] + mixing * next.Q[j];
    }
  }
  throw NoConvergence("self-consistent loop reached max_iter", std::move(history));
}

InvariantReport measure_invariants(const Physics& phys, const DirectionSet& set, const Grid& grid,
                                   const QField& qf) {
  RayField rays;
  const QField f = sweep(qf.Q, phys, set, grid, &rays);
  InvariantReport rep;
  const C2 id = C2::Identity();
  auto sample = [&](const C2& g) {
    rep.trace_g = std::max(rep.trace_g, std::abs(trace(g)));
    rep.g2 = std::max(rep.g2, max_abs(g * g - id));
  };
  for (const auto* side : {&rays.plus, &rays.minus}) {
    for (const auto& r : *side) {
      sample(r.outer_a);
      sample(r.outer_b);
      for (const auto& g : r.node) sample(g);
    }
  }
  for (std::size_t j = 0; j < f.Q.size(); ++j)
    rep.trace_Q = std::max({rep.trace_Q, std::abs(trace(f.Q[j])), std::abs(trace(f.J[j]))});

  double jmax = 0;
  for (const auto& J : f.J) jmax = std::max(jmax, max_abs(J));
  for (int j = 1; j + 1 < grid.N; ++j)
    rep.current_drift = std::max(rep.current_drift, max_abs(f.J[j + 1] - f.J[j]));
  if (jmax > 0) rep.current_drift /= jmax;

  const cplx I(0.0, 1.0);
  const C2 lp = lambda_plus(), lm = lambda_minus();
  const int N = grid.N;
  rep.contact_Q = std::max(max_abs(nilpotent_conjugate(f.Q_a_out, lp, I * phys.gamma_a) - f.Q[0]),
                           max_abs(nilpotent_conjugate(f.Q[N], lm, I * phys.gamma_b) - f.Q_b_out));
  rep.contact_J = std::max(max_abs(nilpotent_conjugate(f.J_a_out, lp, I * phys.gamma_a) - f.J[0]),
                           max_abs(nilpotent_conjugate(f.J[N], lm, I * phys.gamma_b) - f.J_b_out));
  return rep;
}

}  // namespace rft
