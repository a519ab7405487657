#include "rft/spectrum.hpp"

#include <atomic>
#include <exception>
#include <cmath>
#include <numbers>
#include <thread>

namespace rft {

std::pair<cplx, cplx> contact_gammas(cplx gamma, Convention conv) {
  if (conv == Convention::Sqrt) {
    const cplx s = std::sqrt(gamma);
    return {s, s};
  }
  return {gamma, 1.0};
}

cplx gen_fun(const QField& qf, cplx gamma, Convention conv) {
  const cplx I(0.0, 1.0);
  if (conv == Convention::AOnly) return I * qf.J_a_out(1, 0);
  const cplx gp = 1.0 / (2.0 * std::sqrt(gamma));
  return I * gp * (qf.J_a_out(1, 0) + qf.J_b_out(0, 1));
}

double rho_at(double T, cplx F) {
  if (!(T > 0.0 && T < 1.0)) throw DomainError("rho_at: T must lie in (0,1)");
  return F.imag() / (std::numbers::pi * T * T);
}

std::vector<double> clustered_T_grid(int count, double exponent, double u_lo, double u_hi) {
  if (count < 2) throw DomainError("T grid needs at least 2 points");
  if (!(0.0 <= u_lo && u_lo < u_hi && u_hi <= 1.0)) throw DomainError("T grid bounds invalid");
  std::vector<double> T(count);
  for (int m = 0; m < count; ++m) {
    const double u = u_lo + (u_hi - u_lo) * m / (count - 1);
    T[m] = 1.0 - std::pow(1.0 - u, exponent);
  }
  return T;
}

std::size_t SpectrumTable::failures() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += !r.ok;
  return n;
}

namespace {

template <typename F>
double trapezoid(const std::vector<SpectrumRow>& rows, F&& f) {
  double s = 0.0;
  const SpectrumRow* prev = nullptr;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    if (prev) s += 0.5 * (r.T - prev->T) * (f(r) + f(*prev));
    prev = &r;
  }
  return s;
}

}  // namespace

double SpectrumTable::norm() const {
  return trapezoid(rows, [](const SpectrumRow& r) { return r.rho; });
}

double SpectrumTable::mean_T() const {
  return trapezoid(rows, [](const SpectrumRow& r) { return r.T * r.rho; });
}

double SpectrumTable::rho_interp(double T) const {
  const SpectrumRow* prev = nullptr;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    if (r.T == T) return r.rho;
    if (prev && prev->T <= T && T <= r.T) {
      const double u = (T - prev->T) / (r.T - prev->T);
      return (1 - u) * prev->rho + u * r.rho;
    }
    prev = &r;
  }
  return std::nan("");
}

namespace {

// Anneals η from 1e-2 down to the target, warm-starting each stage, so the iteration stays on
// the retarded branch (Im F ≥ 0) where the direct start from Q̃ ≡ 0 drifted to the advanced one.
QField eta_continuation(const Physics& base, double T, const DirectionSet& set,
                        const ScanJob& job) {
  std::vector<C2> Q;
  QField qf;
  int iters = 0;
  std::vector<double> history;
  for (double eta = 1e-2;; eta /= 10) {
    const bool last = eta <= job.settings.eta * 1.0000001;
    if (last) eta = job.settings.eta;
    const cplx gamma(1.0 / T, eta);
    const auto [ga, gb] = contact_gammas(gamma, job.convention);
    Physics phys = base;
    phys.gamma_a = ga;
    phys.gamma_b = gb;
    qf = solve(phys, set, job.grid, job.settings, Q.empty() ? nullptr : &Q);
    iters += qf.iterations;
    history.insert(history.end(), qf.residual_history.begin(), qf.residual_history.end());
    if (last) break;
    Q = qf.Q;
  }
  qf.iterations = iters;
  qf.residual_history = std::move(history);
  return qf;
}

}  // namespace

SpectrumRow solve_point(double T, const DirectionSet& set, const ScanJob& job) {
  SpectrumRow row;
  row.T = T;
  try {
    if (!(T > 0.0 && T < 1.0)) throw DomainError("T must lie in (0,1)");
    row.gamma = cplx(1.0 / T, job.settings.eta);
    const auto [ga, gb] = contact_gammas(row.gamma, job.convention);
    const Physics phys{job.L_over_ell, job.eps_hat, ga, gb};
    QField qf;
    int spent = 0;
    std::exception_ptr direct_error;
    try {
      qf = solve(phys, set, job.grid, job.settings);
      spent = qf.iterations;
    } catch (const NoConvergence& e) {
      spent = static_cast<int>(e.residual_history.size());
      direct_error = std::current_exception();
    } catch (const NonFinite&) {
      direct_error = std::current_exception();
    } catch (const ParamBlowup&) {
      direct_error = std::current_exception();
    }
    const bool direct_ok =
        !direct_error && rho_at(T, gen_fun(qf, row.gamma, job.convention)) >= -kRhoFloor;
    if (!direct_ok && job.settings.eta < 1e-2) {
      qf = eta_continuation(phys, T, set, job);
      qf.iterations += spent;
      row.continuation = true;
    } else if (direct_error) {
      std::rethrow_exception(direct_error);
    }
    row.F = gen_fun(qf, row.gamma, job.convention);
    row.rho = rho_at(T, row.F);
    row.iters = qf.iterations;
    row.residual = qf.residual_history.back();
    row.ok = true;
  } catch (const NoConvergence& e) {
    row.iters = static_cast<int>(e.residual_history.size());
    row.residual = e.residual_history.empty() ? std::nan("") : e.residual_history.back();
    row.error = std::string(e.kind()) + ": " + e.what();
  } catch (const Error& e) {
    row.error = std::string(e.kind()) + ": " + e.what();
  }
  if (!row.ok) {
    row.F = cplx(std::nan(""), std::nan(""));
    row.rho = std::nan("");
  }
  return row;
}

SpectrumTable scan_points(const std::vector<double>& Tgrid, int threads,
                          const std::function<SpectrumRow(double)>& fn) {
  for (std::size_t m = 1; m < Tgrid.size(); ++m)
    if (!(Tgrid[m] > Tgrid[m - 1])) throw DomainError("T grid must be strictly increasing");
  SpectrumTable table;
  table.rows.resize(Tgrid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t m; (m = next.fetch_add(1)) < Tgrid.size();) table.rows[m] = fn(Tgrid[m]);
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(Tgrid.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return table;
}

SpectrumTable scan(const std::vector<double>& Tgrid, const DirectionSet& set, const ScanJob& job,
                   int threads) {
  return scan_points(Tgrid, threads, [&](double T) { return solve_point(T, set, job); });
}

}  // namespace rft
