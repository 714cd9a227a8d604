#include "spm/power.hpp"

#include <algorithm>
#include <cmath>

#include "spm/error.hpp"

namespace spm {

ShiftParams shift_gamma(int n) {
  if (n < 2) throw DimensionError("shift_gamma requires n >= 2");
  ShiftParams p;
  p.n = n;
  const double dn = n;
  p.c_n = n <= 4 ? std::sqrt(2.0 * (dn - 1.0) / dn) : (2.0 - std::sqrt(2.0)) * std::sqrt(dn);
  p.gamma = p.c_n / 2.0;
  return p;
}

double c_nu(double nu) { return nu > 0.5 ? std::sqrt(std::max(0.0, nu * (1.0 - nu))) : 0.5; }

Vector random_unit(int length, Rng& rng) {
  std::normal_distribution<double> gauss;
  Vector x(length);
  do {
    for (int i = 0; i < length; ++i) x[i] = gauss(rng);
  } while (x.norm() == 0.0);
  return x.normalized();
}

namespace {

Vector step_from_pull(const Pull& p, const Vector& x, double gamma) {
  Vector next = p.pulled + gamma * x;
  const double nrm = next.norm();
  if (!(nrm > 0)) throw NumericalError("power step produced a zero vector");
  return next / nrm;
}

}  // namespace

Vector power_step(const SubspaceState& s, const Vector& x, double gamma) {
  return step_from_pull(project_pull(s, x), x, gamma);
}

Vector adaptive_step(const SubspaceState& s, const Vector& x, const ShiftParams& params) {
  const Pull p = project_pull(s, x);
  return step_from_pull(p, x, c_nu(p.value) * params.c_n);
}

PowerResult iterate_from(const SubspaceState& s, const PowerConfig& cfg, Vector x) {
  if (s.rank() == 0) throw NumericalError("power iteration on an empty subspace");
  const ShiftParams params = shift_gamma(s.n);
  PowerResult r;
  Pull p = project_pull(s, x);
  if (cfg.record_trace) r.trace.push_back(p.value);
  for (int k = 0; k < cfg.max_iters; ++k) {
    const double gamma = cfg.adaptive ? c_nu(p.value) * params.c_n : params.gamma;
    Vector next = step_from_pull(p, x, gamma);
    const double moved = (next - x).norm();
    x = std::move(next);
    p = project_pull(s, x);
    ++r.iterations;
    if (cfg.record_trace) r.trace.push_back(p.value);
    if (moved <= cfg.step_tol) {
      r.converged = true;
      break;
    }
  }
  r.x_star = std::move(x);
  r.f_star = p.value;
  r.total_iterations = r.iterations;
  r.success = r.f_star >= cfg.success_threshold;
  return r;
}

PowerResult run_power(const SubspaceState& s, const PowerConfig& cfg, Rng& rng) {
  if (s.rank() == 0) throw NumericalError("power iteration on an empty subspace");
  if (cfg.max_iters <= 0 || !(cfg.step_tol > 0) || cfg.max_restarts < 0 || !(cfg.success_threshold < 1.0))
    throw DimensionError("invalid power configuration");
  PowerResult best;
  int total = 0, attempt = 0;
  for (; attempt <= cfg.max_restarts; ++attempt) {
    PowerResult r = iterate_from(s, cfg, random_unit(s.length, rng));
    total += r.iterations;
    if (attempt == 0 || r.f_star > best.f_star) best = std::move(r);
    if (best.success) break;
  }
  best.total_iterations = total;
  best.restarts_used = std::min(attempt, cfg.max_restarts);
  return best;
}

}  // namespace spm
