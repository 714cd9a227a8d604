#include "spm/experiments.hpp"

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "spm/error.hpp"
#include "spm/multi_index.hpp"

namespace spm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool matches_some(const Vector& x, const Matrix& unit_cols, double tol) {
  for (Eigen::Index i = 0; i < unit_cols.cols(); ++i) {
    const double d = std::min((x - unit_cols.col(i)).norm(), (x + unit_cols.col(i)).norm());
    if (d <= tol) return true;
  }
  return false;
}

}  // namespace

int trial_threads() {
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("SPM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) threads = std::min(threads, cap);
  }
  return std::max(1, threads);
}

std::vector<LandscapeRow> sweep_landscape(int length, int n, const std::vector<int>& ranks, int trials,
                                          std::uint64_t seed, double match_tol) {
  std::vector<LandscapeRow> rows;
  PowerConfig cfg;
  cfg.max_restarts = 0;
  for (int rank : ranks) {
    if (rank < 1) throw DimensionError("sweep_landscape: rank must be positive");
    std::vector<char> hit(static_cast<std::size_t>(trials), 0);
    const std::uint64_t rank_seed = derive_seed(seed, static_cast<std::uint64_t>(rank));
#pragma omp parallel for schedule(dynamic) num_threads(trial_threads())
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(rank_seed, static_cast<std::uint64_t>(t)));
      std::normal_distribution<double> gauss;
      Matrix a(length, rank);
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = gauss(rng);
      a.colwise().normalize();
      // span of the a_i^{(x)n}; orthonormalized directly instead of via an eigendecomposition
      const Matrix k = khatri_rao_power(a, n);
      Eigen::HouseholderQR<Matrix> qr(k);
      SubspaceState s;
      s.n = n;
      s.length = length;
      const Eigen::Index r = std::min<Eigen::Index>(k.rows(), k.cols());
      s.basis = qr.householderQ() * Matrix::Identity(k.rows(), r);
      s.inverse = Matrix::Identity(r, r);
      const PowerResult p = iterate_from(s, cfg, random_unit(length, rng));
      hit[static_cast<std::size_t>(t)] = matches_some(p.x_star, a, match_tol);
    }
    LandscapeRow row{rank, trials, 0};
    for (char h : hit) row.hits += h;
    rows.push_back(row);
  }
  return rows;
}

std::vector<MaxRankRow> sweep_maxrank(const std::vector<int>& lengths, const std::vector<int>& ranks, int trials,
                                      std::uint64_t seed, int order, double tol) {
  std::vector<MaxRankRow> rows;
  for (int length : lengths)
    for (int rank : ranks) {
      std::vector<char> ok(static_cast<std::size_t>(trials), 0);
      const std::uint64_t cell = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(length)),
                                             static_cast<std::uint64_t>(rank));
#pragma omp parallel for schedule(dynamic) num_threads(trial_threads())
      for (int t = 0; t < trials; ++t) {
        EnsembleSpec spec;
        spec.order = order;
        spec.length = length;
        spec.rank = rank;
        spec.seed = derive_seed(cell, 2 * static_cast<std::uint64_t>(t));
        try {
          const Planted p = synth(spec);
          SpmConfig cfg;
          cfg.power.seed = derive_seed(cell, 2 * static_cast<std::uint64_t>(t) + 1);
          // a component that never reaches the threshold already rules out an exact decomposition
          cfg.strict = true;
          const CPDecomposition d = decompose(p.tensor, cfg);
          ok[static_cast<std::size_t>(t)] = decomposition_error(p.tensor, cp_reconstruct(d, order, length)) <= tol;
        } catch (const Error&) {
          ok[static_cast<std::size_t>(t)] = 0;
        }
      }
      MaxRankRow row{length, rank, trials, 0};
      for (char o : ok) row.successes += o;
      rows.push_back(row);
    }
  return rows;
}

std::vector<NoiseRow> sweep_noise(int length, int rank, const std::vector<double>& sigmas, int trials,
                                  std::uint64_t seed, NoiseReference reference, int order) {
  std::vector<NoiseRow> rows;
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    const double sigma = sigmas[si];
    std::vector<double> err(static_cast<std::size_t>(trials), 0.0);
    std::vector<char> failed(static_cast<std::size_t>(trials), 0);
    const std::uint64_t cell = derive_seed(seed, si);
#pragma omp parallel for schedule(dynamic) num_threads(trial_threads())
    for (int t = 0; t < trials; ++t) {
      EnsembleSpec spec;
      spec.order = order;
      spec.length = length;
      spec.rank = rank;
      spec.components = ComponentDist::gaussian;
      spec.weights = WeightDist::ones;
      spec.seed = derive_seed(cell, 3 * static_cast<std::uint64_t>(t));
      try {
        const Planted p = synth(spec);
        Rng noise_rng(derive_seed(cell, 3 * static_cast<std::uint64_t>(t) + 1));
        const SymTensor noisy = p.tensor + symmetric_noise(order, length, sigma, noise_rng);
        SpmConfig cfg;
        cfg.rank.fixed_rank = rank;
        cfg.membership_tol.reset();
        cfg.power.seed = derive_seed(cell, 3 * static_cast<std::uint64_t>(t) + 2);
        const CPDecomposition d = decompose(noisy, cfg);
        const SymTensor& ref = reference == NoiseReference::clean ? p.tensor : noisy;
        err[static_cast<std::size_t>(t)] = decomposition_error(ref, cp_reconstruct(d, order, length));
      } catch (const Error&) {
        failed[static_cast<std::size_t>(t)] = 1;
      }
    }
    NoiseRow row;
    row.sigma = sigma;
    row.trials = trials;
    int used = 0;
    for (int t = 0; t < trials; ++t) {
      if (failed[static_cast<std::size_t>(t)]) {
        ++row.failures;
        continue;
      }
      ++used;
      row.mean_error += err[static_cast<std::size_t>(t)];
    }
    if (used) row.mean_error /= used;
    row.mean_ratio = sigma > 0 ? row.mean_error / sigma : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<GpcaRow> sweep_gpca(int length, const std::vector<int>& dims, double sigma, const std::vector<int>& sizes,
                                int trials, std::uint64_t seed, bool estimate_noise) {
  std::vector<GpcaRow> rows;
  std::size_t flat_rank = 0;
  for (int d : dims) flat_rank += binomial(d + 1, 2);
  const bool same_dim = std::all_of(dims.begin(), dims.end(), [&](int d) { return d == dims.front(); });
  for (std::size_t ni = 0; ni < sizes.size(); ++ni) {
    std::vector<double> err(static_cast<std::size_t>(trials), 0.0), sig(static_cast<std::size_t>(trials), 0.0);
    std::vector<char> failed(static_cast<std::size_t>(trials), 0);
    const std::uint64_t cell = derive_seed(seed, ni);
#pragma omp parallel for schedule(dynamic) num_threads(trial_threads())
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(cell, 2 * static_cast<std::uint64_t>(t)));
      SubspaceArrangement truth;
      for (int d : dims) truth.bases.push_back(random_orthonormal(length, d, rng));
      const PointCloud cloud = sample_arrangement(truth, sizes[ni], sigma, rng);
      GpcaConfig cfg;
      cfg.spm.rank.fixed_rank = static_cast<int>(flat_rank);
      if (same_dim) cfg.spm.fixed_dim = dims.front();
      cfg.spm.membership_tol.reset();
      cfg.spm.power.seed = derive_seed(cell, 2 * static_cast<std::uint64_t>(t) + 1);
      if (!estimate_noise) cfg.sigma = sigma;
      try {
        const GpcaFit fit = fit_subspaces(cloud, cfg);
        sig[static_cast<std::size_t>(t)] = fit.sigma;
        err[static_cast<std::size_t>(t)] = fit.arrangement.bases.size() == truth.bases.size()
                                                ? subspace_error(truth, fit.arrangement)
                                                : 0.0;
        failed[static_cast<std::size_t>(t)] = fit.arrangement.bases.size() != truth.bases.size();
      } catch (const Error&) {
        failed[static_cast<std::size_t>(t)] = 1;
      }
    }
    GpcaRow row;
    row.points = sizes[ni];
    row.trials = trials;
    int used = 0;
    for (int t = 0; t < trials; ++t) {
      if (failed[static_cast<std::size_t>(t)]) {
        ++row.failures;
        continue;
      }
      ++used;
      row.mean_error += err[static_cast<std::size_t>(t)];
      row.mean_sigma += sig[static_cast<std::size_t>(t)];
    }
    if (used) {
      row.mean_error /= used;
      row.mean_sigma /= used;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<BenchRecord> bench(const EnsembleSpec& spec, int repeat, const SpmConfig& cfg) {
  std::vector<BenchRecord> out;
  for (int run = 0; run < repeat; ++run) {
    EnsembleSpec s = spec;
    s.seed = derive_seed(spec.seed, 2 * static_cast<std::uint64_t>(run));
    BenchRecord rec;
    rec.ensemble = spec.name;
    rec.run = run;
    auto t0 = Clock::now();
    const Planted p = synth(s);
    rec.seconds_synth = seconds_since(t0);
    SpmConfig c = cfg;
    c.power.seed = derive_seed(spec.seed, 2 * static_cast<std::uint64_t>(run) + 1);
    SpmStats st;
    t0 = Clock::now();
    SymTensor approx;
    if (s.is_block()) {
      const auto d = decompose_btd(p.tensor, c, &st);
      rec.seconds_total = seconds_since(t0);
      approx = btd_reconstruct(d);
    } else {
      const auto d = decompose(p.tensor, c, &st);
      rec.seconds_total = seconds_since(t0);
      approx = cp_reconstruct(d, s.order, s.length);
    }
    rec.rank = static_cast<std::size_t>(st.initial_rank);
    rec.seconds_extract = st.seconds_extract;
    rec.seconds_power = st.seconds_power;
    rec.seconds_deflate = st.seconds_deflate;
    rec.mean_iterations = st.mean_iterations();
    rec.restarts = st.total_restarts();
    rec.error = decomposition_error(p.tensor, approx);
    out.push_back(rec);
  }
  return out;
}

std::string landscape_csv(const std::vector<LandscapeRow>& rows) {
  std::ostringstream o;
  o << "rank,trials,hits,frequency\n";
  for (const auto& r : rows) o << r.rank << ',' << r.trials << ',' << r.hits << ',' << r.frequency() << '\n';
  return o.str();
}

std::string maxrank_csv(const std::vector<MaxRankRow>& rows) {
  std::ostringstream o;
  o << "length,rank,trials,successes,frequency\n";
  for (const auto& r : rows)
    o << r.length << ',' << r.rank << ',' << r.trials << ',' << r.successes << ',' << r.frequency() << '\n';
  return o.str();
}

std::string noise_csv(const std::vector<NoiseRow>& rows) {
  std::ostringstream o;
  o.precision(6);
  o << "sigma,trials,failures,mean_error,error_over_sigma\n";
  for (const auto& r : rows)
    o << r.sigma << ',' << r.trials << ',' << r.failures << ',' << r.mean_error << ',' << r.mean_ratio << '\n';
  return o.str();
}

std::string gpca_csv(const std::vector<GpcaRow>& rows) {
  std::ostringstream o;
  o.precision(6);
  o << "points,trials,failures,mean_subspace_error,mean_sigma_hat\n";
  for (const auto& r : rows)
    o << r.points << ',' << r.trials << ',' << r.failures << ',' << r.mean_error << ',' << r.mean_sigma << '\n';
  return o.str();
}

std::string bench_csv(const std::vector<BenchRecord>& rows) {
  std::ostringstream o;
  o.precision(6);
  o << "ensemble,run,rank,t_extract,t_power,t_deflate,t_total,avg_iterations,restarts,error\n";
  for (const auto& r : rows)
    o << r.ensemble << ',' << r.run << ',' << r.rank << ',' << r.seconds_extract << ',' << r.seconds_power << ','
      << r.seconds_deflate << ',' << r.seconds_total << ',' << r.mean_iterations << ',' << r.restarts << ','
      << r.error << '\n';
  return o.str();
}

}  // namespace spm
