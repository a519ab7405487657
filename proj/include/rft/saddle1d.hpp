#pragma once

#include <optional>
#include <vector>

#include "rft/mat2.hpp"

namespace rft {

struct Obstacle {
  double gamma0 = 1.0;
  double sigma = 0.0;  // in units of λ; 0 puts the whole weight on one node
  std::optional<double> x0;  // in units of λ; defaults to L/2
};

/// Lengths are in units of λ (so k = 2π).
struct Profile1D {
  double L = 20.0;
  double L_over_ell = 5.0;
  double varsigma = 0.0;  // edge smoothing length
  double ppw = 20.0;      // points per wavelength
  double padding = 2.0;   // free region beyond each edge
  cplx gamma_a = 0.0, gamma_b = 0.0;
  std::optional<Obstacle> obstacle;
};

/// Discretized operator in block-tridiagonal form (2x2 blocks).
struct Mesh1D {
  double h = 0, k = 0, pinu = 0;  // spacing, wavenumber, lattice πν = h / (2 sin kh)
  int j0 = 0, jb = 0;             // nodes at x = 0 and x = L
  std::vector<double> x;          // node positions in units of λ
  std::vector<double> profile;    // disorder envelope in [0,1]
  std::vector<double> obstacle;   // B(x_j)
};

Mesh1D make_mesh(const Profile1D& p);

struct BlockTridiag {
  std::vector<C2> lower, diag, upper;  // lower[j] couples j to j-1, upper[j] couples j to j+1
};

/// Assembles A = ∂² + k² + iαQ + contacts + B with outgoing closures, for a field Q̃ on the mesh.
BlockTridiag assemble(const Profile1D& p, const Mesh1D& m, const std::vector<C2>& Qtilde);

/// Diagonal blocks of A⁻¹ by forward/backward Schur recursions.
std::vector<C2> inverse_diagonal(const BlockTridiag& A);

/// Q̃_j = (i/h)(A⁻¹)_jj / πν.
std::vector<C2> green_diag(const Profile1D& p, const Mesh1D& m, const std::vector<C2>& Qtilde);

struct Field1D {
  Mesh1D mesh;
  std::vector<C2> Qtilde;
  double oscillation_metric = 0;
  int iterations = 0;
  std::vector<double> residual_history;
};

Field1D solve_1d(const Profile1D& p, double tol = 1e-10, int max_iter = 2000, double mixing = 1.0);

/// Fraction of the spectral energy of Q̃11 on [0.1L, 0.9L] at |κ| ≥ k (linear trend removed,
/// Hann window).
double oscillation_metric(const Mesh1D& m, const std::vector<C2>& Qtilde, double L);

}  // namespace rft
