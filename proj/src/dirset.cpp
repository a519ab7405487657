#include "rft/dirset.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace rft {

double unit_ball_volume(double d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double unit_ball_surface(double d) { return d * unit_ball_volume(d); }

double moment_closed_form(int d, int kappa) {
  return unit_ball_volume(d + kappa - 2) /
         (unit_ball_surface(d - 1) * unit_ball_volume(kappa - 1));
}

int DirectionSet::mode_count() const {
  int n = 0;
  for (const auto& dir : directions) n += dir.multiplicity;
  return n;
}

void finalize(DirectionSet& set) {
  if (set.directions.empty()) throw EmptySet("direction set is empty");
  for (int kappa = 0; kappa < 2; ++kappa) {
    auto& w = set.weight[kappa];
    w.resize(set.size());
    cplx sum = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& dir = set.directions[i];
      w[i] = double(dir.multiplicity) * dir.c * (kappa == 0 ? 1.0 / dir.mu : cplx(1.0));
      sum += w[i];
    }
    if (sum == 0.0) throw EmptySet("direction set has zero total weight");
    set.norm[kappa] = sum;
    for (auto& x : w) x /= sum;
  }
}

namespace {

// Visits every n in Z^dim with |n|^2 <= r2max.
template <typename F>
void lattice_ball(int dim, long r2max, long rmax, std::vector<long>& n, long r2, F&& visit) {
  if (static_cast<int>(n.size()) == dim) {
    visit(r2);
    return;
  }
  for (long k = -rmax; k <= rmax; ++k) {
    const long r2k = r2 + k * k;
    if (r2k > r2max) continue;
    n.push_back(k);
    lattice_ball(dim, r2max, rmax, n, r2k, visit);
    n.pop_back();
  }
}

}  // namespace

DirectionSet waveguide_modes(int d, double W_over_lambda, double mu_min, bool drop_cutoff_modes) {
  if (d < 2) throw InvalidDim("waveguide_modes: d must be >= 2");
  if (!(W_over_lambda > 0)) throw DomainError("waveguide_modes: W/lambda must be positive");
  const double w2 = W_over_lambda * W_over_lambda;
  const long rmax = static_cast<long>(std::floor(W_over_lambda + 1e-9));
  const long r2max = static_cast<long>(std::floor(w2 * (1.0 + 1e-14) + 1e-9));

  // multiplicity grouped by the exact integer |n|^2
  std::map<long, int> shells;
  std::vector<long> n;
  lattice_ball(d - 1, r2max, rmax, n, 0, [&](long r2) { ++shells[r2]; });

  DirectionSet set;
  set.kind = DirKind::WaveguidePeriodic;
  set.dims = d;
  for (const auto& [r2, mult] : shells) {
    const double mu2 = 1.0 - double(r2) / w2;
    const double mu = std::sqrt(std::max(mu2, 0.0));
    if (mu < mu_min) {
      if (drop_cutoff_modes) continue;
      throw GrazingMode("waveguide_modes: mode with |n|^2 = " + std::to_string(r2) +
                        " has direction cosine below the floor");
    }
    set.directions.push_back({cplx(mu, 0.0), 1.0, mult});
  }
  finalize(set);
  return set;
}

void gauss_jacobi_unit(int n, double alpha, std::vector<double>& t, std::vector<double>& w) {
  // Jacobi (alpha, beta=0) on [-1,1], then t = (x+1)/2.
  const double beta = 0.0;
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double bk;
    if (k == 1) {
      bk = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      bk = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(bk);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(n - 1, 0)), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw QuadratureFailure("Golub-Welsch eigen-solve failed");

  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);
  const double scale = std::pow(2.0, alpha + beta + 1.0);
  t.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    t[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
    w[i] = mu0 * v0 * v0 / scale;
  }
}

DirectionSet slab_quadrature(int d, int N_mu, double a) {
  if (d < 2) throw InvalidDim("slab_quadrature: d must be >= 2");
  if (N_mu < 2) throw DomainError("slab_quadrature: N_mu must be >= 2");
  if (a < 0) throw DomainError("slab_quadrature: contour parameter must be >= 0");
  const double p = (d - 3) / 2.0;
  std::vector<double> t, w;
  gauss_jacobi_unit(N_mu, p, t, w);

  DirectionSet set;
  set.kind = DirKind::SlabQuadrature;
  set.dims = d;
  const cplx I(0.0, 1.0);
  for (int i = 0; i < N_mu; ++i) {
    const double ti = t[i];
    const cplx mu = ti + I * a * ti * (1.0 - ti * ti);
    const cplx dmu = 1.0 + I * a * (1.0 - 3.0 * ti * ti);
    // (1-μ²)^p / (1-t)^p = (1 - i a t(1+t))^p (1+μ)^p, free of the endpoint singularity
    const cplx ratio = std::pow(1.0 - I * a * ti * (1.0 + ti), p) * std::pow(1.0 + mu, p);
    set.directions.push_back({mu, w[i] * dmu * mu * ratio, 1});
  }
  finalize(set);
  return set;
}

DirectionSet single_direction(cplx mu) {
  DirectionSet set;
  set.kind = DirKind::Custom;
  set.dims = 1;
  set.directions.push_back({mu, 1.0, 1});
  finalize(set);
  return set;
}

C2 directional_mean(std::span<const C2> values, const DirectionSet& set, int kappa) {
  if (set.directions.empty()) throw EmptySet("directional_mean: empty set");
  if (values.size() != set.size()) throw DomainError("directional_mean: size mismatch");
  if (kappa != 0 && kappa != 1) throw DomainError("directional_mean: kappa must be 0 or 1");
  C2 acc = C2::Zero();
  for (std::size_t i = 0; i < values.size(); ++i) acc += set.weight[kappa][i] * values[i];
  return acc;
}

}  // namespace rft
