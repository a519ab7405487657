#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rft/sc.hpp"

namespace rft {

enum class Convention { Sqrt, AOnly };

/// (γ_a, γ_b) with γ_a γ_b = γ: (√γ, √γ) or (γ, 1).
std::pair<cplx, cplx> contact_gammas(cplx gamma, Convention conv);

/// F = i(γ'_a J̃²¹(x_a⁻) + γ'_b J̃¹²(x_b⁺)).
cplx gen_fun(const QField& qf, cplx gamma, Convention conv);

/// Negative ρ below this magnitude is attributed to the finite η.
inline constexpr double kRhoFloor = 1e-6;

/// ρ(T) = Im F / (π T²); DomainError outside (0,1).
double rho_at(double T, cplx F);

/// T_m = 1 - (1-u_m)^p with u_m uniform on [u_lo, u_hi].
std::vector<double> clustered_T_grid(int count = 199, double exponent = 3.0, double u_lo = 0.001,
                                     double u_hi = 0.999);

struct SpectrumRow {
  double T = 0;
  cplx gamma = 0.0;
  cplx F = 0.0;
  double rho = 0;
  int iters = 0;
  double residual = 0;
  bool ok = false;
  bool continuation = false;  // recovered through η continuation
  std::string error;  // error kind and message when !ok
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;

  std::size_t failures() const;
  /// Trapezoid of ρ over the successful rows.
  double norm() const;
  /// Trapezoid of T ρ over the successful rows.
  double mean_T() const;
  /// Linear interpolation of ρ; NaN outside the tabulated range.
  double rho_interp(double T) const;
};

struct ScanJob {
  double L_over_ell = 1.0;
  double eps_hat = 0.0;
  Convention convention = Convention::Sqrt;
  Grid grid{};
  SolveSettings settings{};
};

/// Full solver at one T, starting from Q̃ ≡ 0. If that start fails or lands on the advanced
/// branch (ρ < -kRhoFloor), the point is redone by η continuation. Errors are caught into the row.
SpectrumRow solve_point(double T, const DirectionSet& set, const ScanJob& job);

/// Evaluates fn at every T on a pool of `threads` workers; rows come back in T order.
SpectrumTable scan_points(const std::vector<double>& Tgrid, int threads,
                          const std::function<SpectrumRow(double)>& fn);

SpectrumTable scan(const std::vector<double>& Tgrid, const DirectionSet& set, const ScanJob& job,
                   int threads = 1);

}  // namespace rft
