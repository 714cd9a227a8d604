#include "spm/driver.hpp"

#include <chrono>
#include <numeric>
#include <string>

#include "spm/error.hpp"
#include "spm/multi_index.hpp"

namespace spm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void rethrow_at(const NumericalError& e, std::size_t index) {
  throw NumericalError("component " + std::to_string(index) + ": " + e.what());
}

ComponentStats stats_of(const PowerResult& p) {
  ComponentStats c;
  c.f_star = p.f_star;
  c.iterations = p.total_iterations;
  c.restarts = p.restarts_used;
  c.success = p.success;
  return c;
}

}  // namespace

double SpmStats::mean_iterations() const {
  if (components.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : components) sum += c.iterations;
  return sum / static_cast<double>(components.size());
}

int SpmStats::total_restarts() const {
  int sum = 0;
  for (const auto& c : components) sum += c.restarts;
  return sum;
}

CPDecomposition decompose_state(SubspaceState s, const SpmConfig& cfg, SpmStats* stats) {
  if (s.n < 2) throw DimensionError("decompose requires n >= 2");
  SpmStats local;
  SpmStats& st = stats ? *stats : local;
  st.initial_rank = s.rank();
  st.components.clear();
  Rng rng(cfg.power.seed);
  CPDecomposition out;
  while (s.rank() > 0) {
    const std::size_t index = out.components.size();
    try {
      auto t0 = Clock::now();
      PowerResult p = run_power(s, cfg.power, rng);
      st.seconds_power += seconds_since(t0);
      if (!p.success && cfg.strict)
        throw NumericalError("power method did not reach the success threshold (f = " + std::to_string(p.f_star) + ")");
      t0 = Clock::now();
      CpDeflation d = deflate_cp(s, p.x_star, p.success ? cfg.membership_tol : std::nullopt);
      st.seconds_deflate += seconds_since(t0);
      CpComponent comp{d.lambda, p.x_star};
      canonicalize_sign(comp.vector);
      out.components.push_back(std::move(comp));
      st.components.push_back(stats_of(p));
      s = std::move(d.state);
    } catch (const NumericalError& e) {
      rethrow_at(e, index);
    }
  }
  return out;
}

CPDecomposition decompose(const SymTensor& t, const SpmConfig& cfg, SpmStats* stats) {
  SpmStats local;
  SpmStats& st = stats ? *stats : local;
  st = SpmStats{};
  const auto t0 = Clock::now();
  SubspaceState s = extract_subspace(t, cfg.rank, cfg.eigen);
  st.seconds_extract = seconds_since(t0);
  return decompose_state(std::move(s), cfg, &st);
}

Matrix local_component_matrix(const SubspaceState& s, const Vector& x) {
  const Matrix w = pulled_columns(s, x);
  const double n = s.n;
  Matrix m = (1.0 / n) * Matrix::Identity(s.length, s.length) + ((n - 1.0) / n) * x * x.transpose();
  m -= w * w.transpose();
  return 0.5 * (m + m.transpose());
}

Matrix local_component(const SubspaceState& s, const Vector& x, double null_tol, std::optional<int> fixed_dim) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(local_component_matrix(s, x));
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in local_component");
  Eigen::Index ell = 0;
  if (fixed_dim) {
    if (*fixed_dim < 1 || *fixed_dim > s.length) throw DimensionError("fixed component dimension out of range");
    ell = *fixed_dim;
  } else {
    while (ell < es.eigenvalues().size() && es.eigenvalues()[ell] <= null_tol) ++ell;
  }
  if (ell == 0) throw NumericalError("local component has no null direction");
  return es.eigenvectors().leftCols(ell);
}

BlockTermDecomposition decompose_btd(const SymTensor& t, const SpmConfig& cfg, SpmStats* stats) {
  SpmStats local;
  SpmStats& st = stats ? *stats : local;
  st = SpmStats{};
  auto t0 = Clock::now();
  SubspaceState s = extract_subspace(t, cfg.rank, cfg.eigen);
  st.seconds_extract = seconds_since(t0);
  st.initial_rank = s.rank();

  BlockTermDecomposition out;
  out.order = t.order();
  out.length = t.length();
  Rng rng(cfg.power.seed);
  while (s.rank() > 0) {
    const std::size_t index = out.blocks.size();
    try {
      t0 = Clock::now();
      PowerResult p = run_power(s, cfg.power, rng);
      st.seconds_power += seconds_since(t0);
      if (!p.success && cfg.strict)
        throw NumericalError("power method did not reach the success threshold (f = " + std::to_string(p.f_star) + ")");
      t0 = Clock::now();
      Matrix a = local_component(s, p.x_star, cfg.null_tol, cfg.fixed_dim);
      const int ell = static_cast<int>(a.cols());
      const auto need = binomial(ell + s.n - 1, s.n);
      if (need > static_cast<std::size_t>(s.rank()))
        throw NumericalError("inconsistent rank: component of dimension " + std::to_string(ell) + " needs " +
                             std::to_string(need) + " of the remaining " + std::to_string(s.rank()));
      BlockDeflation d = deflate_btd(s, a, p.success ? cfg.membership_tol : std::nullopt);
      st.seconds_deflate += seconds_since(t0);
      ComponentStats cs = stats_of(p);
      cs.dim = ell;
      st.components.push_back(cs);
      out.blocks.push_back({std::move(a), matrix_to_core(d.core_matrix, s.n, ell)});
      s = std::move(d.state);
    } catch (const NumericalError& e) {
      rethrow_at(e, index);
    }
  }
  return out;
}

double decomposition_error(const SymTensor& t, const SymTensor& approx) { return (t - approx).norm(); }

double relative_error(const SymTensor& t, const SymTensor& approx) {
  const double nt = t.norm();
  const double diff = (t - approx).norm();
  return nt > 0 ? diff / nt : diff;
}

}  // namespace spm
