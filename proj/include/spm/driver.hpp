#pragma once

#include <optional>
#include <vector>

#include "spm/deflate.hpp"
#include "spm/power.hpp"

namespace spm {

struct SpmConfig {
  RankPolicy rank;
  PowerConfig power;
  EigenMethod eigen = EigenMethod::packed;
  // Residual bound for accepting a found point; disabled for noisy inputs.
  std::optional<double> membership_tol = 1e-6;
  double null_tol = 1e-8;        // local component nullspace cutoff
  std::optional<int> fixed_dim;  // take this many smallest eigenvalues instead
  // Throw when no restart reaches the success threshold. Off by default: the
  // best candidate is deflated and the failure is recorded in the stats.
  bool strict = false;
};

struct ComponentStats {
  double f_star = 0.0;
  int iterations = 0;        // summed over restarts
  int restarts = 0;
  bool success = false;
  int dim = 1;               // ell for block terms
};

struct SpmStats {
  int initial_rank = 0;
  std::vector<ComponentStats> components;
  double seconds_extract = 0.0;
  double seconds_power = 0.0;
  double seconds_deflate = 0.0;

  double mean_iterations() const;
  int total_restarts() const;
};

CPDecomposition decompose(const SymTensor& t, const SpmConfig& cfg = {}, SpmStats* stats = nullptr);

/// Same loop starting from an already extracted state (weights only depend on it).
CPDecomposition decompose_state(SubspaceState s, const SpmConfig& cfg, SpmStats* stats = nullptr);

/// (1/n) I + ((n-1)/n) x x^T - W W^T with W = pulled_columns(s, x).
Matrix local_component_matrix(const SubspaceState& s, const Vector& x);

/// Orthonormal basis of the near-null eigenvectors of local_component_matrix.
Matrix local_component(const SubspaceState& s, const Vector& x, double null_tol = 1e-8,
                       std::optional<int> fixed_dim = std::nullopt);

BlockTermDecomposition decompose_btd(const SymTensor& t, const SpmConfig& cfg = {}, SpmStats* stats = nullptr);

/// |T - T_hat| (Frobenius).
double decomposition_error(const SymTensor& t, const SymTensor& approx);

/// |T - T_hat| / |T|.
double relative_error(const SymTensor& t, const SymTensor& approx);

}  // namespace spm
