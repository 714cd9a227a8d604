#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spm/synth.hpp"

namespace spm {

/// Thread count for trial-level parallelism, capped by SPM_THREADS when set.
int trial_threads();

struct LandscapeRow {
  int rank = 0;
  int trials = 0;
  int hits = 0;
  double frequency() const { return trials ? static_cast<double>(hits) / trials : 0.0; }
};

/// One random start per trial, no restarts; a hit is a limit within match_tol
/// of some planted +-a_i.
std::vector<LandscapeRow> sweep_landscape(int length, int n, const std::vector<int>& ranks, int trials,
                                          std::uint64_t seed, double match_tol = 1e-6);

struct MaxRankRow {
  int length = 0;
  int rank = 0;
  int trials = 0;
  int successes = 0;
  double frequency() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

/// Full decomposition success (error <= tol) frequency over an (L, R) grid.
std::vector<MaxRankRow> sweep_maxrank(const std::vector<int>& lengths, const std::vector<int>& ranks, int trials,
                                      std::uint64_t seed, int order = 4, double tol = 1e-6);

enum class NoiseReference { clean, noisy };

struct NoiseRow {
  double sigma = 0.0;
  int trials = 0;
  double mean_error = 0.0;
  double mean_ratio = 0.0;  // error / sigma, 0 when sigma = 0
  int failures = 0;
};

/// Gaussian components with unit weights plus symmetric Gaussian noise; the
/// decomposition is run with the true rank.
std::vector<NoiseRow> sweep_noise(int length, int rank, const std::vector<double>& sigmas, int trials,
                                  std::uint64_t seed, NoiseReference reference = NoiseReference::clean, int order = 4);

struct GpcaRow {
  int points = 0;
  int trials = 0;
  double mean_error = 0.0;
  double mean_sigma = 0.0;
  int failures = 0;
};

/// Random subspaces of the given dims, noisy samples, fit with the known
/// flattening rank and subspace dimension.
std::vector<GpcaRow> sweep_gpca(int length, const std::vector<int>& dims, double sigma, const std::vector<int>& sizes,
                                int trials, std::uint64_t seed, bool estimate_noise = true);

struct BenchRecord {
  std::string ensemble;
  int run = 0;
  std::size_t rank = 0;
  double seconds_synth = 0.0;
  double seconds_extract = 0.0;
  double seconds_power = 0.0;
  double seconds_deflate = 0.0;
  double seconds_total = 0.0;
  double mean_iterations = 0.0;
  int restarts = 0;
  double error = 0.0;
};

std::vector<BenchRecord> bench(const EnsembleSpec& spec, int repeat, const SpmConfig& cfg = {});

std::string landscape_csv(const std::vector<LandscapeRow>& rows);
std::string maxrank_csv(const std::vector<MaxRankRow>& rows);
std::string noise_csv(const std::vector<NoiseRow>& rows);
std::string gpca_csv(const std::vector<GpcaRow>& rows);
std::string bench_csv(const std::vector<BenchRecord>& rows);

}  // namespace spm
