#include "rft/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace rft {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Waveguide: return "waveguide";
    case Mode::Slab: return "slab";
    case Mode::Quasiballistic: return "quasiballistic";
    case Mode::Saddle1D: return "saddle1d";
  }
  return "?";
}

std::vector<double> RunConfig::T_grid() const {
  return clustered_T_grid(T_count, T_exponent, T_u_min, T_u_max);
}

SolveSettings RunConfig::settings() const {
  SolveSettings s;
  s.tol = tol;
  s.max_iter = max_iter;
  s.mixing = mixing;
  s.auto_damp = auto_damp;
  s.eta = eta;
  return s;
}

ScanJob RunConfig::job() const {
  ScanJob j;
  j.L_over_ell = L_over_ell;
  j.eps_hat = eps_L_over_k;
  j.convention = convention;
  j.grid.N = N_x;
  j.settings = settings();
  return j;
}

DirectionSet RunConfig::directions() const {
  const Mode geo = mode == Mode::Quasiballistic ? qb_geometry : mode;
  if (geo == Mode::Waveguide) return waveguide_modes(d, W_over_lambda, mu_min, drop_cutoff_modes);
  if (geo == Mode::Slab) return slab_quadrature(d, N_mu, contour_a);
  throw DomainError("this mode has no direction set");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  explicit Reader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  bool has(const std::string& k) const { return kv_.count(k) != 0; }

  template <typename T>
  void get(const std::string& k, T& out) {
    used_.insert(k);
    auto it = kv_.find(k);
    if (it == kv_.end()) return;
    if (!convert(it->second, out)) errors.push_back(k + ": cannot parse '" + it->second + "'");
  }

  void require(const std::string& k, const std::string& why) {
    if (!has(k)) errors.push_back(k + ": required for " + why);
  }

  void check(bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  }

  void unknown_keys() {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) errors.push_back(k + ": unknown key");
  }

  std::vector<std::string> errors;

 private:
  static bool convert(const std::string& s, double& out) {
    try {
      std::size_t pos = 0;
      out = std::stod(s, &pos);
      return pos == s.size();
    } catch (...) {
      return false;
    }
  }
  static bool convert(const std::string& s, int& out) {
    try {
      std::size_t pos = 0;
      out = std::stoi(s, &pos);
      return pos == s.size();
    } catch (...) {
      return false;
    }
  }
  static bool convert(const std::string& s, bool& out) {
    std::string l = s;
    std::transform(l.begin(), l.end(), l.begin(), ::tolower);
    if (l == "true" || l == "1" || l == "yes") return out = true, true;
    if (l == "false" || l == "0" || l == "no") return out = false, true;
    return false;
  }
  static bool convert(const std::string& s, std::string& out) {
    out = s;
    return true;
  }

  const std::map<std::string, std::string>& kv_;
  std::set<std::string> used_;
};

bool parse_mode(const std::string& s, Mode& m) {
  if (s == "waveguide") return m = Mode::Waveguide, true;
  if (s == "slab") return m = Mode::Slab, true;
  if (s == "quasiballistic") return m = Mode::Quasiballistic, true;
  if (s == "saddle1d") return m = Mode::Saddle1D, true;
  return false;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw ParseError("line " + std::to_string(lineno) + ": duplicate key " + key);
    kv[key] = val;
  }

  RunConfig c;
  c.raw = kv;
  Reader r(kv);

  std::string mode;
  r.get("mode", mode);
  if (!r.has("mode"))
    r.errors.push_back("mode: required");
  else if (!parse_mode(mode, c.mode))
    r.errors.push_back("mode: must be waveguide, slab, quasiballistic or saddle1d");

  std::string geometry = "waveguide", convention = "sqrt";
  r.get("d", c.d);
  r.get("W_over_lambda", c.W_over_lambda);
  r.get("mu_min", c.mu_min);
  r.get("drop_cutoff_modes", c.drop_cutoff_modes);
  r.get("N_mu", c.N_mu);
  r.get("contour_a", c.contour_a);
  r.get("geometry", geometry);
  r.get("L_over_ell", c.L_over_ell);
  r.get("eps_L_over_k", c.eps_L_over_k);
  r.get("convention", convention);
  r.get("T_count", c.T_count);
  r.get("T_exponent", c.T_exponent);
  r.get("T_u_min", c.T_u_min);
  r.get("T_u_max", c.T_u_max);
  r.get("eta", c.eta);
  r.get("tol", c.tol);
  r.get("max_iter", c.max_iter);
  r.get("mixing", c.mixing);
  r.get("auto_damp", c.auto_damp);
  r.get("N_x", c.N_x);
  r.get("qb_damping", c.qb_damping);
  r.get("threads", c.threads);
  std::string outdir;
  r.get("output_dir", outdir);
  if (!outdir.empty()) c.output_dir = outdir;

  // saddle1d
  auto& p = c.profile;
  double ga_re = 1.2, ga_im = 1e-5, gb_re = 1.2, gb_im = 1e-5, varsigma_over_L = 0;
  r.get("L_over_lambda", p.L);
  r.get("varsigma_over_L", varsigma_over_L);
  r.get("ppw", p.ppw);
  r.get("padding_over_lambda", p.padding);
  r.get("gamma_a_re", ga_re);
  r.get("gamma_a_im", ga_im);
  r.get("gamma_b_re", gb_re);
  r.get("gamma_b_im", gb_im);
  r.get("saddle_tol", c.saddle_tol);
  r.get("saddle_max_iter", c.saddle_max_iter);
  r.get("saddle_mixing", c.saddle_mixing);
  double og = 0, osig = 0, ox0 = 0.5;
  r.get("obstacle_gamma0", og);
  r.get("obstacle_sigma_over_L", osig);
  r.get("obstacle_x0_over_L", ox0);
  r.unknown_keys();

  if (geometry == "waveguide")
    c.qb_geometry = Mode::Waveguide;
  else if (geometry == "slab")
    c.qb_geometry = Mode::Slab;
  else
    r.errors.push_back("geometry: must be waveguide or slab");
  if (convention == "sqrt")
    c.convention = Convention::Sqrt;
  else if (convention == "a_only")
    c.convention = Convention::AOnly;
  else
    r.errors.push_back("convention: must be sqrt or a_only");

  r.require("L_over_ell", "every mode");
  const Mode geo = c.mode == Mode::Quasiballistic ? c.qb_geometry : c.mode;
  if (c.mode != Mode::Saddle1D) {
    r.require("d", mode_name(c.mode));
    if (geo == Mode::Waveguide) r.require("W_over_lambda", "waveguide directions");
    if (geo == Mode::Slab) r.require("N_mu", "slab directions");
    r.check(c.d >= 2, "d: must be >= 2");
    if (geo == Mode::Waveguide) r.check(c.W_over_lambda > 0, "W_over_lambda: must be > 0");
    if (geo == Mode::Slab) {
      r.check(c.N_mu >= 2, "N_mu: must be >= 2");
      r.check(c.contour_a >= 0, "contour_a: must be >= 0");
    }
  }
  r.check(c.L_over_ell >= 0, "L_over_ell: must be >= 0");
  r.check(c.mu_min > 0, "mu_min: must be > 0");
  r.check(c.T_count >= 2, "T_count: must be >= 2");
  r.check(c.T_exponent > 0, "T_exponent: must be > 0");
  r.check(0 <= c.T_u_min && c.T_u_min < c.T_u_max && c.T_u_max <= 1,
          "T_u_min/T_u_max: need 0 <= T_u_min < T_u_max <= 1");
  r.check(c.eta >= 0, "eta: must be >= 0");
  r.check(c.tol > 0, "tol: must be > 0");
  r.check(c.max_iter >= 1, "max_iter: must be >= 1");
  r.check(c.mixing > 0 && c.mixing <= 1, "mixing: must be in (0,1]");
  r.check(c.N_x >= 2, "N_x: must be >= 2");
  r.check(c.qb_damping > 0 && c.qb_damping <= 1, "qb_damping: must be in (0,1]");
  r.check(c.threads >= 1, "threads: must be >= 1");
  if (c.mode == Mode::Saddle1D) {
    r.check(p.L > 0, "L_over_lambda: must be > 0");
    r.check(c.L_over_ell > 0, "L_over_ell: must be > 0 for saddle1d");
    r.check(p.ppw >= 20, "ppw: must be >= 20");
    r.check(p.padding >= 2, "padding_over_lambda: must be >= 2");
    r.check(varsigma_over_L >= 0, "varsigma_over_L: must be >= 0");
    r.check(osig >= 0, "obstacle_sigma_over_L: must be >= 0");
    r.check(c.saddle_tol > 0, "saddle_tol: must be > 0");
    r.check(c.saddle_max_iter >= 1, "saddle_max_iter: must be >= 1");
    r.check(c.saddle_mixing > 0 && c.saddle_mixing <= 1, "saddle_mixing: must be in (0,1]");
  }
  if (!r.errors.empty()) throw ValidationError(r.errors);

  p.L_over_ell = c.L_over_ell;
  p.varsigma = varsigma_over_L * p.L;
  p.gamma_a = {ga_re, ga_im};
  p.gamma_b = {gb_re, gb_im};
  if (r.has("obstacle_gamma0")) p.obstacle = Obstacle{og, osig * p.L, ox0 * p.L};
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace rft
