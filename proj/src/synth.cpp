#include "spm/synth.hpp"

#include <cmath>
#include <map>

#include "spm/error.hpp"
#include "spm/multi_index.hpp"

namespace spm {

namespace {

Vector draw_component(ComponentDist dist, int length, Rng& rng) {
  std::normal_distribution<double> gauss;
  Vector v(length);
  for (int i = 0; i < length; ++i) v[i] = gauss(rng);
  switch (dist) {
    case ComponentDist::unit_sphere:
      return v.normalized();
    case ComponentDist::gaussian:
      return v;
    case ComponentDist::mean_shifted:
      return (v + Vector::Ones(length)).normalized();
    case ComponentDist::positive_orthant:
      return v.cwiseAbs().normalized();
    case ComponentDist::block_gaussian:
      break;
  }
  throw DimensionError("not a CP component distribution");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 of the pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

EnsembleSpec named_ensemble(const std::string& name, std::uint64_t seed) {
  EnsembleSpec s;
  s.name = name;
  s.seed = seed;
  auto cp = [&](int m, int l, int r, ComponentDist d = ComponentDist::unit_sphere) {
    s.order = m;
    s.length = l;
    s.rank = r;
    s.components = d;
  };
  auto block = [&](int m, int l, int threes, int twos) {
    s.order = m;
    s.length = l;
    s.components = ComponentDist::block_gaussian;
    s.block_dims.assign(static_cast<std::size_t>(threes), 3);
    s.block_dims.insert(s.block_dims.end(), static_cast<std::size_t>(twos), 2);
  };
  if (name == "T1") cp(4, 40, 200);
  else if (name == "T2") cp(4, 40, 400);
  else if (name == "T3") cp(4, 40, 600);
  else if (name == "T4") cp(4, 60, 400);
  else if (name == "T5") cp(4, 80, 400);
  else if (name == "T6") cp(4, 40, 200, ComponentDist::mean_shifted);
  else if (name == "T7") cp(4, 40, 200, ComponentDist::positive_orthant);
  else if (name == "T8") block(4, 40, 20, 20);
  else if (name == "T9") cp(6, 16, 400);
  else if (name == "T10") block(6, 16, 8, 8);
  else if (name == "T1-desk") cp(4, 10, 20);
  else if (name == "T6-desk") cp(4, 10, 20, ComponentDist::mean_shifted);
  else if (name == "T7-desk") cp(4, 10, 20, ComponentDist::positive_orthant);
  else if (name == "T8-desk") block(4, 16, 4, 4);
  else if (name == "T9-desk") cp(6, 10, 40);
  else if (name == "T10-desk") block(6, 10, 4, 4);
  else throw DimensionError("unknown ensemble '" + name + "'");
  return s;
}

std::vector<std::string> ensemble_names() {
  return {"T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10",
          "T1-desk", "T6-desk", "T7-desk", "T8-desk", "T9-desk", "T10-desk"};
}

Matrix random_orthonormal(int length, int ell, Rng& rng) {
  if (ell < 1 || ell > length) throw DimensionError("random_orthonormal: bad dimension");
  std::normal_distribution<double> gauss;
  Matrix g(length, ell);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(length, ell);
  // sign fix by diag(R) makes the distribution Haar
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < ell; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

SymTensor random_symmetric(int order, int length, Rng& rng) {
  std::normal_distribution<double> gauss;
  const auto sorted = sorted_multi_indices(length, order);
  std::vector<double> vals(sorted.size());
  for (double& v : vals) v = gauss(rng);
  std::map<std::size_t, double> by_pos;
  for (std::size_t i = 0; i < sorted.size(); ++i) by_pos[ravel(sorted[i].entries, length)] = vals[i];
  DenseTensor t(order, length);
  for (std::size_t p = 0; p < t.size(); ++p) t[p] = by_pos[canonical_linear(p, order, length)];
  return SymTensor::unchecked(std::move(t));
}

SymTensor symmetric_noise(int order, int length, double sigma, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, sigma);
  DenseTensor g(order, length);
  for (std::size_t p = 0; p < g.size(); ++p) g[p] = gauss(rng);
  return symmetrize(g);
}

Planted synth(const EnsembleSpec& spec) {
  if (spec.order < 2 || spec.length < 1) throw DimensionError("synth: bad order or length");
  Rng rng(spec.seed);
  std::normal_distribution<double> gauss;
  Planted out;
  if (!spec.is_block()) {
    if (spec.rank < 0) throw DimensionError("synth: negative rank");
    std::vector<Vector> vecs;
    for (int i = 0; i < spec.rank; ++i) vecs.push_back(draw_component(spec.components, spec.length, rng));
    for (int i = 0; i < spec.rank; ++i) {
      const double w = spec.weights == WeightDist::gaussian ? gauss(rng) : 1.0;
      Vector& v = vecs[static_cast<std::size_t>(i)];
      const double nrm = v.norm();
      CpComponent c{w * std::pow(nrm, spec.order), v / nrm};
      canonicalize_sign(c.vector);
      out.cp.components.push_back(std::move(c));
    }
    out.tensor = cp_reconstruct(out.cp, spec.order, spec.length);
    out.expected_rank = static_cast<std::size_t>(spec.rank);
    return out;
  }
  if (spec.order % 2 != 0) throw DimensionError("synth: block ensembles need even order");
  out.btd.order = spec.order;
  out.btd.length = spec.length;
  for (int ell : spec.block_dims) {
    Matrix a = random_orthonormal(spec.length, ell, rng);
    SymTensor core = random_symmetric(spec.order, ell, rng);
    out.btd.blocks.push_back({std::move(a), std::move(core)});
    out.expected_rank += binomial(ell + spec.order / 2 - 1, spec.order / 2);
  }
  out.tensor = btd_reconstruct(out.btd);
  return out;
}

PointCloud sample_arrangement(const SubspaceArrangement& arrangement, int points, double sigma, Rng& rng) {
  if (arrangement.bases.empty() || points < 1) throw DimensionError("sample_arrangement: nothing to sample");
  const int length = static_cast<int>(arrangement.bases.front().rows());
  const int k = static_cast<int>(arrangement.bases.size());
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> pick(0, k - 1);
  PointCloud c;
  c.points.resize(length, points);
  c.labels.resize(static_cast<std::size_t>(points));
  for (int p = 0; p < points; ++p) {
    const int j = pick(rng);
    const Matrix& a = arrangement.bases[static_cast<std::size_t>(j)];
    Vector coef(a.cols());
    for (Eigen::Index i = 0; i < coef.size(); ++i) coef[i] = gauss(rng);
    Vector y = a * coef;
    for (int i = 0; i < length; ++i) y[i] += sigma * gauss(rng);
    c.points.col(p) = y;
    c.labels[static_cast<std::size_t>(p)] = j;
  }
  return c;
}

}  // namespace spm
