#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rft/saddle1d.hpp"
#include "rft/spectrum.hpp"

namespace rft {

enum class Mode { Waveguide, Slab, Quasiballistic, Saddle1D };

struct RunConfig {
  Mode mode = Mode::Waveguide;
  // geometry
  int d = 2;
  double W_over_lambda = 0;
  double mu_min = 1e-9;
  bool drop_cutoff_modes = false;
  int N_mu = 64;
  double contour_a = 0.5;
  Mode qb_geometry = Mode::Waveguide;  // direction set used by the quasiballistic mode
  // physics
  double L_over_ell = 0;
  double eps_L_over_k = 0;
  Convention convention = Convention::Sqrt;
  // T grid
  int T_count = 199;
  double T_exponent = 3.0;
  double T_u_min = 0.001;
  double T_u_max = 0.999;
  // solver
  double eta = 1e-6;
  double tol = 1e-10;
  int max_iter = 2000;
  double mixing = 1.0;
  bool auto_damp = true;
  int N_x = 1024;
  double qb_damping = 0.5;
  // saddle1d
  Profile1D profile{};
  double saddle_tol = 1e-10;
  int saddle_max_iter = 5000;
  double saddle_mixing = 1.0;
  // run
  std::filesystem::path output_dir = ".";
  int threads = 1;

  std::map<std::string, std::string> raw;  // keys exactly as given, for the summary echo

  std::vector<double> T_grid() const;
  SolveSettings settings() const;
  ScanJob job() const;
  DirectionSet directions() const;  // throws for saddle1d
};

std::string mode_name(Mode m);

/// Parses `key = value` lines (`#` starts a comment). Throws ParseError or ValidationError
/// listing every problem found.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace rft
