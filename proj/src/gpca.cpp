#include "spm/gpca.hpp"

#include <algorithm>
#include <cmath>

#include "spm/assignment.hpp"
#include "spm/error.hpp"
#include "spm/kernels.hpp"
#include "spm/multi_index.hpp"

namespace spm {

namespace {

SymTensor identity2(int length) {
  DenseTensor id(2, length);
  for (int i = 0; i < length; ++i) id[static_cast<std::size_t>(i) * length + i] = 1.0;
  return SymTensor::unchecked(std::move(id));
}

double quad(const SymTensor& t, const Vector& v) {
  return v.dot(flatten_mat(t) * v);
}

}  // namespace

SymTensor sample_moment(const PointCloud& cloud, int order) {
  if (cloud.size() == 0) throw DimensionError("sample_moment on an empty cloud");
  if (order < 1) throw DimensionError("moment order must be positive");
  const int length = cloud.length();
  const auto sorted = sorted_multi_indices(length, order);
  std::vector<int> table;
  table.reserve(sorted.size() * static_cast<std::size_t>(order));
  for (const auto& s : sorted) table.insert(table.end(), s.entries.begin(), s.entries.end());
  std::vector<double> sums(sorted.size());
  kernels::moment_sums(cloud.points, table, order, sums);

  std::vector<std::size_t> slot(ipow(static_cast<std::size_t>(length), order));
  for (std::size_t i = 0; i < sorted.size(); ++i) slot[ravel(sorted[i].entries, length)] = i;
  DenseTensor out(order, length);
  const double inv = 1.0 / cloud.size();
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = sums[slot[canonical_linear(p, order, length)]] * inv;
  return SymTensor::unchecked(std::move(out));
}

DebiasedMoments debias_moments(const SymTensor& m2, const SymTensor& m4, double sigma) {
  if (m2.order() != 2 || m4.order() != 4 || m2.length() != m4.length())
    throw DimensionError("debias_moments expects second and fourth moments of equal length");
  if (!(sigma >= 0)) throw DimensionError("sigma must be non-negative");
  if (sigma == 0.0) return {m2, m4};
  const SymTensor id = identity2(m2.length());
  const double s2 = sigma * sigma;
  SymTensor m2z = m2 - s2 * id;
  SymTensor m4z = m4 - (6.0 * s2) * symmetrize(outer(m2.dense(), id.dense()));
  m4z += (3.0 * s2 * s2) * symmetrize(outer(id.dense(), id.dense()));
  return {std::move(m2z), std::move(m4z)};
}

double estimate_sigma(const SymTensor& m2, const SymTensor& m4) {
  if (m2.order() != 2 || m4.order() != 4 || m2.length() != m4.length())
    throw DimensionError("estimate_sigma expects second and fourth moments of equal length");
  const SymmetricSpectrum sp = symmetric_eigen(m4);
  const double lambda = sp.values[0];
  const Vector v = sp.vectors.col(0);
  const SymTensor id = identity2(m2.length());
  const double a1 = quad(symmetrize(outer(m2.dense(), id.dense())), v);
  const double a2 = quad(symmetrize(outer(id.dense(), id.dense())), v);
  if (!(a2 > 1e-14)) throw NumericalError("estimate_sigma: degenerate noise direction");
  const double disc = a1 * a1 - a2 * lambda / 3.0;
  if (disc < 0) return std::sqrt(std::max(0.0, a1 / a2));
  return std::sqrt(std::max(0.0, (a1 - std::sqrt(disc)) / a2));
}

GpcaFit fit_subspaces(const PointCloud& cloud, const GpcaConfig& cfg) {
  const SymTensor m2 = sample_moment(cloud, 2);
  const SymTensor m4 = sample_moment(cloud, 4);
  GpcaFit fit;
  fit.sigma = cfg.sigma ? *cfg.sigma : estimate_sigma(m2, m4);
  const DebiasedMoments z = debias_moments(m2, m4, fit.sigma);
  const BlockTermDecomposition btd = decompose_btd(z.m4, cfg.spm, &fit.stats);
  for (const auto& b : btd.blocks) fit.arrangement.bases.push_back(b.factor);
  return fit;
}

std::vector<int> classify(const PointCloud& cloud, const SubspaceArrangement& arrangement) {
  if (arrangement.bases.empty()) throw DimensionError("classify needs a non-empty arrangement");
  for (const auto& b : arrangement.bases)
    if (b.rows() != cloud.length()) throw DimensionError("classify: subspace length mismatch");
  std::vector<int> labels(static_cast<std::size_t>(cloud.size()));
  for (int p = 0; p < cloud.size(); ++p) {
    const auto y = cloud.points.col(p);
    double best = 0.0;
    int arg = 0;
    for (std::size_t j = 0; j < arrangement.bases.size(); ++j) {
      const Matrix& a = arrangement.bases[j];
      const double d = (y - a * (a.transpose() * y)).norm();
      if (j == 0 || d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    labels[static_cast<std::size_t>(p)] = arg;
  }
  return labels;
}

double subspace_error(const SubspaceArrangement& truth, const SubspaceArrangement& estimate) {
  if (truth.bases.size() != estimate.bases.size()) throw DimensionError("subspace_error: count mismatch");
  const auto k = static_cast<Eigen::Index>(truth.bases.size());
  if (k == 0) return 0.0;
  std::vector<Matrix> pt, pe;
  for (const auto& b : truth.bases) pt.push_back(projector(b));
  for (const auto& b : estimate.bases) pe.push_back(projector(b));
  Matrix cost(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      if (pt[i].rows() != pe[j].rows()) throw DimensionError("subspace_error: length mismatch");
      cost(i, j) = (pt[i] - pe[j]).squaredNorm();
    }
  return std::sqrt(std::max(0.0, assignment_cost(cost, solve_assignment(cost))));
}

double misclassification_error(const std::vector<int>& truth, const std::vector<int>& estimate) {
  if (truth.size() != estimate.size()) throw DimensionError("misclassification_error: length mismatch");
  if (truth.empty()) return 0.0;
  int k = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || estimate[i] < 0) throw DimensionError("labels must be non-negative");
    k = std::max({k, truth[i] + 1, estimate[i] + 1});
  }
  Matrix cost = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < truth.size(); ++i) cost(truth[i], estimate[i]) -= 1.0;
  const double agree = -assignment_cost(cost, solve_assignment(cost));
  return 1.0 - agree / static_cast<double>(truth.size());
}

}  // namespace spm
