#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spm/gpca.hpp"
#include "spm/power.hpp"

namespace spm {

enum class ComponentDist {
  unit_sphere,       // normalized standard Gaussian
  gaussian,          // raw standard Gaussian, not normalized
  mean_shifted,      // normalized N(1, I)
  positive_orthant,  // uniform on the positive part of the sphere
  block_gaussian,    // Haar-random orthonormal factors with Gaussian symmetric cores
};

enum class WeightDist { gaussian, ones };

struct EnsembleSpec {
  std::string name = "custom";
  int order = 4;
  int length = 10;
  int rank = 20;                // CP ensembles
  std::vector<int> block_dims;  // block ensembles
  ComponentDist components = ComponentDist::unit_sphere;
  WeightDist weights = WeightDist::gaussian;
  std::uint64_t seed = 0;

  bool is_block() const noexcept { return components == ComponentDist::block_gaussian; }
};

/// Named ensembles: T1..T10 at full size and the reduced T1-desk, T6-desk,
/// T7-desk, T8-desk, T9-desk, T10-desk.
EnsembleSpec named_ensemble(const std::string& name, std::uint64_t seed = 0);
std::vector<std::string> ensemble_names();

struct Planted {
  SymTensor tensor;
  CPDecomposition cp;          // unit components, canonical signs (CP ensembles)
  BlockTermDecomposition btd;  // block ensembles
  std::size_t expected_rank = 0;
};

Planted synth(const EnsembleSpec& spec);

/// Independent stream for sub-task `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// L x ell matrix with orthonormal columns spanning a Haar-random subspace.
Matrix random_orthonormal(int length, int ell, Rng& rng);

/// Symmetric tensor whose distinct entries are iid standard Gaussian.
SymTensor random_symmetric(int order, int length, Rng& rng);

/// Sym(G) with G iid N(0, sigma^2) entries.
SymTensor symmetric_noise(int order, int length, double sigma, Rng& rng);

/// Equal mixture of standard Gaussians on each subspace plus N(0, sigma^2 I).
PointCloud sample_arrangement(const SubspaceArrangement& arrangement, int points, double sigma, Rng& rng);

}  // namespace spm
