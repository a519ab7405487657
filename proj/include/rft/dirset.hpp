#pragma once

#include <array>
#include <span>
#include <vector>

#include "rft/mat2.hpp"

namespace rft {

struct Direction {
  cplx mu;
  cplx c = 1.0;
  int multiplicity = 1;
};

enum class DirKind { WaveguidePeriodic, SlabQuadrature, Custom };

struct DirectionSet {
  DirKind kind = DirKind::Custom;
  int dims = 0;
  std::vector<Direction> directions;
  // Σ mult·c·μ^(κ-1) for κ = 0, 1.
  std::array<cplx, 2> norm{};
  // Per-direction weight mult·c·μ^(κ-1) / norm(κ), so that means are plain weighted sums.
  std::array<std::vector<cplx>, 2> weight;

  std::size_t size() const { return directions.size(); }
  cplx moment_norm(int kappa) const { return norm.at(kappa); }
  int mode_count() const;
};

enum class Hemisphere { Plus, Minus };

/// Volume of the unit ball in d dimensions; valid for real d > -2.
double unit_ball_volume(double d);
/// Surface area of the unit sphere bounding the d-ball, S_d = d V_d.
double unit_ball_surface(double d);
/// ∫_0^1 μ^κ (1-μ²)^((d-3)/2) dμ in closed form.
double moment_closed_form(int d, int kappa);

/// Fills norm and weight from the directions; throws EmptySet.
void finalize(DirectionSet& set);

DirectionSet waveguide_modes(int d, double W_over_lambda, double mu_min = 1e-9,
                             bool drop_cutoff_modes = false);
DirectionSet slab_quadrature(int d, int N_mu, double a);
DirectionSet single_direction(cplx mu);

/// Gauss nodes and weights on [0,1] for the weight (1-t)^alpha.
void gauss_jacobi_unit(int n, double alpha, std::vector<double>& t, std::vector<double>& w);

C2 directional_mean(std::span<const C2> values, const DirectionSet& set, int kappa);

}  // namespace rft
