#include "rft/run.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "rft/quasiballistic.hpp"

namespace rft {

using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json config_echo(const RunConfig& c) {
  json raw = json::object();
  for (const auto& [k, v] : c.raw) raw[k] = v;
  json resolved = {{"mode", mode_name(c.mode)},
                   {"d", c.d},
                   {"W_over_lambda", c.W_over_lambda},
                   {"N_mu", c.N_mu},
                   {"contour_a", c.contour_a},
                   {"L_over_ell", c.L_over_ell},
                   {"convention", c.convention == Convention::Sqrt ? "sqrt" : "a_only"},
                   {"T_count", c.T_count},
                   {"T_exponent", c.T_exponent},
                   {"T_u_min", c.T_u_min},
                   {"T_u_max", c.T_u_max},
                   {"eta", c.eta},
                   {"tol", c.tol},
                   {"max_iter", c.max_iter},
                   {"mixing", c.mixing},
                   {"N_x", c.N_x},
                   {"deterministic", true}};
  return {{"given", raw}, {"resolved", resolved}};
}

json quadrature_checks(int N_mu) {
  json out = json::array();
  for (int d : {2, 3})
    for (int kappa : {0, 1})
      for (double a : {0.0, 0.5}) {
        const auto set = slab_quadrature(d, N_mu, a);
        const double exact = moment_closed_form(d, kappa);
        const double err = std::abs(set.moment_norm(kappa) - exact);
        out.push_back({{"d", d}, {"kappa", kappa}, {"a", a}, {"error", err}, {"pass", err < 1e-9}});
      }
  return out;
}

json invariant_json(const InvariantReport& r) {
  return {{"trace_g", r.trace_g},         {"g2_minus_I", r.g2},
          {"trace_Q_J", r.trace_Q},       {"current_drift", r.current_drift},
          {"contact_Q", r.contact_Q},     {"contact_J", r.contact_J},
          {"pass", r.trace_g <= 1e-10 && r.g2 <= 1e-8 && r.current_drift <= 1e-6 &&
                       r.contact_Q <= 1e-8 && r.contact_J <= 1e-8}};
}

InvariantReport invariants_at(const RunConfig& cfg, const DirectionSet& set, double T) {
  const ScanJob job = cfg.job();
  const cplx gamma(1.0 / T, job.settings.eta);
  const auto [ga, gb] = contact_gammas(gamma, job.convention);
  const Physics phys{job.L_over_ell, job.eps_hat, ga, gb};
  const QField qf = solve(phys, set, job.grid, job.settings);
  return measure_invariants(phys, set, job.grid, qf);
}

void write_summary(const std::filesystem::path& dir, const json& j) {
  std::ofstream f(dir / "summary.json");
  f << j.dump(2) << "\n";
}

}  // namespace

SpectrumRow qb_point(double T, const DirectionSet& set, double L_over_ell, double eta,
                     double damping) {
  SpectrumRow row;
  row.T = T;
  try {
    row.gamma = cplx(1.0 / T, eta);
    const QbState st = qb_solve(set, L_over_ell, row.gamma, damping);
    row.F = qb_gen_fun(st, set);
    row.rho = rho_at(T, row.F);
    row.iters = st.iterations;
    double res = 0;
    for (std::size_t i = 0; i < set.size(); ++i)
      res = std::max(res, std::abs(st.f[i] - qb_f(set.directions[i].mu, st.mean_f, st.gamma,
                                                   L_over_ell)));
    row.residual = res;
    row.ok = true;
  } catch (const Error& e) {
    row.error = std::string(e.kind()) + ": " + e.what();
    row.F = cplx(std::nan(""), std::nan(""));
    row.rho = std::nan("");
  }
  return row;
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumTable& table) {
  std::ofstream f(path);
  f << "T,gamma_re,gamma_im,F_re,F_im,rho,iters,residual\n";
  for (const auto& r : table.rows) {
    f << num(r.T) << ',' << num(r.gamma.real()) << ',' << num(r.gamma.imag()) << ','
      << num(r.F.real()) << ',' << num(r.F.imag()) << ',' << num(r.rho) << ',' << r.iters << ','
      << num(r.residual) << '\n';
  }
}

void write_qfield_csv(const std::filesystem::path& path, const Field1D& field) {
  std::ofstream f(path);
  f << "x_over_lambda,Q11_re,Q11_im,Q12_re,Q12_im,Q21_re,Q21_im\n";
  for (std::size_t j = 0; j < field.Qtilde.size(); ++j) {
    const C2& q = field.Qtilde[j];
    f << num(field.mesh.x[j]) << ',' << num(q(0, 0).real()) << ',' << num(q(0, 0).imag()) << ','
      << num(q(0, 1).real()) << ',' << num(q(0, 1).imag()) << ',' << num(q(1, 0).real()) << ','
      << num(q(1, 0).imag()) << '\n';
  }
}

int run(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.output_dir);
  json summary = {{"version", kVersion}, {"config", config_echo(cfg)}};
  auto finish = [&](const char* status, int code) {
    summary["status"] = status;
    summary["exit_code"] = code;
    summary["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_summary(cfg.output_dir, summary);
    return code;
  };

  try {
    if (cfg.mode == Mode::Saddle1D) {
      const Field1D field =
          solve_1d(cfg.profile, cfg.saddle_tol, cfg.saddle_max_iter, cfg.saddle_mixing);
      write_qfield_csv(cfg.output_dir / "qfield.csv", field);
      double tr = 0;
      for (const auto& q : field.Qtilde) tr = std::max(tr, std::abs(trace(q)));
      summary["saddle1d"] = {{"iterations", field.iterations},
                             {"residual", field.residual_history.back()},
                             {"oscillation_metric", field.oscillation_metric},
                             {"max_abs_trace_Q", tr},
                             {"nodes", field.Qtilde.size()}};
      log << "saddle1d converged in " << field.iterations << " iterations, oscillation metric "
          << field.oscillation_metric << "\n";
      return finish("ok", kExitOk);
    }

    const DirectionSet set = cfg.directions();
    summary["directions"] = {{"distinct", set.size()}, {"modes", set.mode_count()}};
    if (set.kind == DirKind::SlabQuadrature) summary["quadrature_checks"] = quadrature_checks(64);

    const auto Tgrid = cfg.T_grid();
    SpectrumTable table;
    if (cfg.mode == Mode::Quasiballistic) {
      table = scan_points(Tgrid, cfg.threads, [&](double T) {
        return qb_point(T, set, cfg.L_over_ell, cfg.eta, cfg.qb_damping);
      });
    } else {
      table = scan(Tgrid, set, cfg.job(), cfg.threads);
    }
    write_spectrum_csv(cfg.output_dir / "spectrum.csv", table);

    json points = json::array();
    for (const auto& r : table.rows) {
      json p = {{"T", r.T}, {"ok", r.ok}, {"iters", r.iters}, {"residual", finite_or_null(r.residual)}};
      if (!r.ok) p["error"] = r.error;
      points.push_back(p);
    }
    summary["points"] = points;
    summary["failures"] = table.failures();
    summary["rho_integral"] = table.norm();
    summary["mean_T"] = table.mean_T();

    if (cfg.mode != Mode::Quasiballistic) {
      try {
        summary["invariants"] = invariant_json(invariants_at(cfg, set, 0.5));
        summary["invariants"]["T"] = 0.5;
      } catch (const Error& e) {
        summary["invariants"] = {{"error", std::string(e.kind()) + ": " + e.what()}};
      }
    }
    log << "scan finished: " << table.rows.size() << " points, " << table.failures()
        << " failures, integral of rho = " << table.norm() << "\n";
    return table.failures() ? finish("partial", kExitPartial) : finish("ok", kExitOk);
  } catch (const Error& e) {
    summary["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    log << "fatal: " << e.kind() << ": " << e.what() << "\n";
    return finish("fatal", kExitFatal);
  }
}

int run_invariants(const RunConfig& cfg, std::ostream& out) {
  int failed = 0;
  auto line = [&](bool pass, const std::string& name, double value, double bound) {
    out << (pass ? "PASS " : "FAIL ") << name << " = " << value << " (bound " << bound << ")\n";
    failed += !pass;
  };
  try {
    for (const auto& q : quadrature_checks(64)) {
      const std::string name = "quadrature d=" + std::to_string(q["d"].get<int>()) +
                               " kappa=" + std::to_string(q["kappa"].get<int>()) +
                               " a=" + num(q["a"].get<double>());
      line(q["pass"].get<bool>(), name, q["error"].get<double>(), 1e-9);
    }
    if (cfg.mode == Mode::Waveguide || cfg.mode == Mode::Slab) {
      const DirectionSet set = cfg.directions();
      const InvariantReport r = invariants_at(cfg, set, 0.5);
      line(r.trace_g <= 1e-10, "max |tr g|", r.trace_g, 1e-10);
      line(r.g2 <= 1e-8, "max |g^2 - I|", r.g2, 1e-8);
      line(r.trace_Q <= 1e-10, "max |tr Q|, |tr J|", r.trace_Q, 1e-10);
      line(r.current_drift <= 1e-6, "bulk current drift", r.current_drift, 1e-6);
      line(r.contact_Q <= 1e-8, "contact jump of Q", r.contact_Q, 1e-8);
      line(r.contact_J <= 1e-8, "contact jump of J", r.contact_J, 1e-8);
    }
  } catch (const Error& e) {
    out << "FAIL " << e.kind() << ": " << e.what() << "\n";
    return kExitFatal;
  }
  return failed ? kExitPartial : kExitOk;
}

}  // namespace rft
