#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "spm/spectral.hpp"

namespace spm {

struct ShiftParams {
  int n = 0;
  double gamma = 0.0;
  double c_n = 0.0;
  bool adaptive = false;
};

ShiftParams shift_gamma(int n);

/// C_nu: sqrt(nu (1 - nu)) above one half, 1/2 otherwise.
double c_nu(double nu);

struct PowerConfig {
  int max_iters = 5000;
  double step_tol = 1e-13;
  double success_threshold = 1.0 - 1e-6;
  int max_restarts = 3;
  std::uint64_t seed = 0;
  bool adaptive = false;
  bool record_trace = false;
};

struct PowerResult {
  Vector x_star;
  double f_star = 0.0;
  int iterations = 0;     // of the returned attempt
  int total_iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  bool success = false;   // f_star >= success_threshold
  std::vector<double> trace;  // f along the returned attempt, if requested
};

using Rng = std::mt19937_64;

/// Uniform point on the unit sphere (normalized standard Gaussian).
Vector random_unit(int length, Rng& rng);

/// (y + gamma x) / |y + gamma x|.
Vector power_step(const SubspaceState& s, const Vector& x, double gamma);

/// power_step with gamma = C_{f(x)} C_n.
Vector adaptive_step(const SubspaceState& s, const Vector& x, const ShiftParams& params);

/// Shifted power iteration from random starts; keeps the best attempt when
/// none reaches cfg.success_threshold. Runs 1 + max_restarts attempts at most.
PowerResult run_power(const SubspaceState& s, const PowerConfig& cfg, Rng& rng);

/// One attempt from a given start.
PowerResult iterate_from(const SubspaceState& s, const PowerConfig& cfg, Vector x);

}  // namespace spm
