#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spm/error.hpp"
#include "spm/experiments.hpp"
#include "spm/io.hpp"

using namespace spm;
using nlohmann::json;

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
}

struct SolverFlags {
  std::uint64_t seed = 0;
  double rank_tol = 1e-10;
  int rank = 0;
  int max_iters = 5000;
  int restarts = 3;
  double null_tol = 1e-8;
  int dim = 0;
  bool strict = false;
  bool no_membership = false;

  void attach(CLI::App* app, bool blocks) {
    app->add_option("--seed", seed, "random seed");
    app->add_option("--rank-tol", rank_tol, "relative eigenvalue cutoff for the flattening rank");
    app->add_option("--rank", rank, "use this flattening rank instead of the cutoff");
    app->add_option("--max-iters", max_iters, "power iterations per attempt")->check(CLI::PositiveNumber);
    app->add_option("--restarts", restarts, "extra random starts when a run falls short")->check(CLI::NonNegativeNumber);
    app->add_flag("--strict", strict, "fail instead of keeping the best candidate");
    app->add_flag("--no-membership", no_membership, "skip the residual check before deflation (noisy input)");
    if (blocks) {
      app->add_option("--null-tol", null_tol, "eigenvalue cutoff for the local component");
      app->add_option("--dim", dim, "use this component dimension instead of the cutoff");
    }
  }

  SpmConfig config() const {
    SpmConfig c;
    c.rank.relative_tol = rank_tol;
    if (rank > 0) c.rank.fixed_rank = rank;
    c.power.max_iters = max_iters;
    c.power.max_restarts = restarts;
    c.power.seed = seed;
    c.null_tol = null_tol;
    if (dim > 0) c.fixed_dim = dim;
    c.strict = strict;
    if (no_membership) c.membership_tol.reset();
    return c;
  }
};

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw DimensionError("bad number in list: '" + cell + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double d : parse_doubles(s)) out.push_back(static_cast<int>(d));
  return out;
}

// "a:b:step" or "a,b,c"
std::vector<int> parse_range(const std::string& s) {
  if (s.find(':') == std::string::npos) return parse_ints(s);
  std::vector<int> parts;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ':')) parts.push_back(std::stoi(cell));
  if (parts.size() < 2 || parts.size() > 3) throw DimensionError("range must be a:b or a:b:step");
  const int step = parts.size() == 3 ? parts[2] : 1;
  if (step <= 0) throw DimensionError("range step must be positive");
  std::vector<int> out;
  for (int v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subspace power method for symmetric tensor decompositions"};
  app.require_subcommand(1);

  std::string input, output, truth_out, labels_out, ensemble = "T1-desk", reference = "clean";
  std::string ranks_s = "120,150,160,200", lengths_s = "10", sigmas_s = "1e-8,1e-6,1e-4,1e-2", dims_s = "3,3",
              sizes_s = "100,1000,10000,100000";
  std::uint64_t seed = 0;
  int trials = 20, repeat = 1, n = 2, length = 10, rank = 20, points = 0;
  double sigma = -1.0;
  SolverFlags solver;

  auto* dec = app.add_subcommand("decompose", "CP decomposition of an STF1 tensor");
  dec->add_option("--input", input, "STF1 tensor")->required();
  dec->add_option("--output", output, "JSON result (default stdout)");
  solver.attach(dec, false);

  auto* btd = app.add_subcommand("btd", "symmetric block term decomposition of an STF1 tensor");
  btd->add_option("--input", input, "STF1 tensor")->required();
  btd->add_option("--output", output, "JSON result (default stdout)");
  solver.attach(btd, true);

  auto* gp = app.add_subcommand("gpca", "fit a union of subspaces to a point cloud");
  gp->add_option("--input", input, "points, CSV (.csv/.txt) or PTS1")->required();
  gp->add_option("--output", output, "JSON subspaces (default stdout)");
  gp->add_option("--labels", labels_out, "CSV of nearest-subspace labels");
  gp->add_option("--sigma", sigma, "noise level; estimated from the moments when omitted");
  solver.attach(gp, true);

  auto* syn = app.add_subcommand("synth", "write a planted tensor or point cloud");
  syn->add_option("--ensemble", ensemble, "T1..T10, T1-desk, T6-desk, T7-desk, T8-desk, T9-desk, T10-desk");
  syn->add_option("--seed", seed);
  syn->add_option("--output", output, "STF1 tensor, or points when --points is given")->required();
  syn->add_option("--truth", truth_out, "JSON of the planted decomposition or subspaces");
  syn->add_option("--points", points, "sample this many points from random subspaces instead");
  syn->add_option("--length", length, "ambient dimension for --points");
  syn->add_option("--dims", dims_s, "subspace dimensions for --points");
  syn->add_option("--sigma", sigma, "noise level for --points");

  auto* ben = app.add_subcommand("bench", "time the pipeline on an ensemble");
  ben->add_option("--ensemble", ensemble);
  ben->add_option("--repeat", repeat)->check(CLI::PositiveNumber);
  ben->add_option("--output", output, "CSV (default stdout)");
  solver.attach(ben, true);

  auto* land = app.add_subcommand("sweep-landscape", "convergence frequency of single power runs");
  land->add_option("--length", length);
  land->add_option("--n", n);
  land->add_option("--ranks", ranks_s, "list a,b,c or range a:b:step");
  land->add_option("--trials", trials);
  land->add_option("--seed", seed);
  land->add_option("--output", output);

  auto* maxr = app.add_subcommand("sweep-maxrank", "full decomposition success over lengths and ranks");
  maxr->add_option("--lengths", lengths_s);
  maxr->add_option("--ranks", ranks_s);
  maxr->add_option("--n", n);
  maxr->add_option("--trials", trials);
  maxr->add_option("--seed", seed);
  maxr->add_option("--output", output);

  auto* noise = app.add_subcommand("sweep-noise", "error of noisy decompositions");
  noise->add_option("--length", length);
  noise->add_option("--rank", rank);
  noise->add_option("--sigmas", sigmas_s);
  noise->add_option("--trials", trials);
  noise->add_option("--seed", seed);
  noise->add_option("--reference", reference, "measure against the clean or the noisy tensor")
      ->check(CLI::IsMember({"clean", "noisy"}));
  noise->add_option("--output", output);

  auto* sg = app.add_subcommand("sweep-gpca", "subspace error against sample size");
  sg->add_option("--length", length);
  sg->add_option("--dims", dims_s);
  sg->add_option("--sigma", sigma);
  sg->add_option("--sizes", sizes_s);
  sg->add_option("--trials", trials);
  sg->add_option("--seed", seed);
  sg->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*dec) {
      const SymTensor t = io::read_tensor(input);
      SpmStats st;
      const CPDecomposition d = decompose(t, solver.config(), &st);
      json j = io::to_json(d);
      j["error"] = decomposition_error(t, cp_reconstruct(d, t.order(), t.length()));
      j["iterations"] = st.mean_iterations();
      j["restarts"] = st.total_restarts();
      emit(output, j.dump(2) + "\n");
    } else if (*btd) {
      const SymTensor t = io::read_tensor(input);
      SpmStats st;
      const BlockTermDecomposition d = decompose_btd(t, solver.config(), &st);
      json j = io::to_json(d);
      j["rank"] = st.initial_rank;
      j["error"] = decomposition_error(t, btd_reconstruct(d));
      j["iterations"] = st.mean_iterations();
      j["restarts"] = st.total_restarts();
      emit(output, j.dump(2) + "\n");
    } else if (*gp) {
      const PointCloud cloud = io::read_points_any(input);
      GpcaConfig cfg;
      cfg.spm = solver.config();
      if (sigma >= 0) cfg.sigma = sigma;
      const GpcaFit fit = fit_subspaces(cloud, cfg);
      json j{{"sigma_hat", fit.sigma}, {"subspaces", io::to_json(fit.arrangement)}};
      emit(output, j.dump(2) + "\n");
      if (!labels_out.empty()) io::write_labels_csv(labels_out, classify(cloud, fit.arrangement));
    } else if (*syn) {
      if (points > 0) {
        Rng rng(seed);
        SubspaceArrangement truth;
        for (int d : parse_ints(dims_s)) truth.bases.push_back(random_orthonormal(length, d, rng));
        const PointCloud cloud = sample_arrangement(truth, points, std::max(0.0, sigma), rng);
        const bool text = output.size() > 4 && (output.ends_with(".csv") || output.ends_with(".txt"));
        text ? io::write_points_csv(output, cloud) : io::write_points(output, cloud);
        if (!truth_out.empty()) {
          json j{{"subspaces", io::to_json(truth)}, {"labels", cloud.labels}};
          io::write_json(truth_out, j);
        }
      } else {
        const Planted p = synth(named_ensemble(ensemble, seed));
        io::write_tensor(output, p.tensor);
        if (!truth_out.empty())
          io::write_json(truth_out, p.btd.blocks.empty() ? io::to_json(p.cp) : io::to_json(p.btd));
      }
    } else if (*ben) {
      SpmConfig cfg = solver.config();
      emit(output, bench_csv(bench(named_ensemble(ensemble, solver.seed), repeat, cfg)));
    } else if (*land) {
      emit(output, landscape_csv(sweep_landscape(length, n, parse_range(ranks_s), trials, seed)));
    } else if (*maxr) {
      emit(output, maxrank_csv(sweep_maxrank(parse_range(lengths_s), parse_range(ranks_s), trials, seed, 2 * n)));
    } else if (*noise) {
      const auto ref = reference == "noisy" ? NoiseReference::noisy : NoiseReference::clean;
      emit(output, noise_csv(sweep_noise(length, rank, parse_doubles(sigmas_s), trials, seed, ref)));
    } else if (*sg) {
      emit(output, gpca_csv(sweep_gpca(length, parse_ints(dims_s), sigma < 0 ? 0.1 : sigma, parse_ints(sizes_s),
                                       trials, seed)));
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
