#include "spm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spm/error.hpp"
#include "spm/kernels.hpp"
#include "spm/multi_index.hpp"

namespace spm {

namespace {

struct SymIndexing {
  std::vector<SortedMultiIndex> sorted;
  std::vector<std::size_t> class_of;  // linear position -> index into `sorted`
};

SymIndexing sym_indexing(int length, int n) {
  SymIndexing out;
  out.sorted = sorted_multi_indices(length, n);
  std::vector<std::size_t> slot(ipow(static_cast<std::size_t>(length), n));
  for (std::size_t i = 0; i < out.sorted.size(); ++i) slot[ravel(out.sorted[i].entries, length)] = i;
  out.class_of.resize(slot.size());
  for (std::size_t p = 0; p < slot.size(); ++p) out.class_of[p] = slot[canonical_linear(p, n, length)];
  return out;
}

struct Spectrum {
  Vector values;
  Matrix vectors;  // columns in R^{L^n}
};

Spectrum packed_spectrum(const SymTensor& t, int n) {
  const int length = t.length();
  const auto ix = sym_indexing(length, n);
  const auto k = static_cast<Eigen::Index>(ix.sorted.size());
  const std::size_t half = ipow(static_cast<std::size_t>(length), n);
  std::vector<std::size_t> pos(ix.sorted.size());
  std::vector<double> root_mu(ix.sorted.size());
  for (std::size_t i = 0; i < ix.sorted.size(); ++i) {
    pos[i] = ravel(ix.sorted[i].entries, length);
    root_mu[i] = std::sqrt(static_cast<double>(ix.sorted[i].multiplicity));
  }
  Matrix g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      g(i, j) = root_mu[ui] * root_mu[uj] * t[pos[ui] * half + pos[uj]];
    }
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in extract_subspace");
  Spectrum out;
  out.values = es.eigenvalues();
  out.vectors.resize(static_cast<Eigen::Index>(half), k);
  for (std::size_t p = 0; p < half; ++p) {
    const std::size_t c = ix.class_of[p];
    out.vectors.row(static_cast<Eigen::Index>(p)) =
        es.eigenvectors().row(static_cast<Eigen::Index>(c)) / root_mu[c];
  }
  return out;
}

Spectrum dense_spectrum(const SymTensor& t) {
  const Matrix m = flatten_mat(t);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in extract_subspace");
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

SymmetricSpectrum symmetric_eigen(const SymTensor& t) {
  if (t.order() % 2 != 0 || t.order() < 2) throw DimensionError("symmetric_eigen requires an even-order tensor");
  Spectrum sp = packed_spectrum(t, t.order() / 2);
  return {std::move(sp.values), std::move(sp.vectors)};
}

Matrix symmetric_basis(int length, int n) {
  const auto ix = sym_indexing(length, n);
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(ix.class_of.size()), static_cast<Eigen::Index>(ix.sorted.size()));
  for (std::size_t p = 0; p < ix.class_of.size(); ++p) {
    const std::size_t c = ix.class_of[p];
    b(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) =
        1.0 / std::sqrt(static_cast<double>(ix.sorted[c].multiplicity));
  }
  return b;
}

SubspaceState extract_subspace(const SymTensor& t, const RankPolicy& policy, EigenMethod method) {
  if (t.order() % 2 != 0) throw DimensionError("extract_subspace requires an even-order tensor");
  if (t.order() < 4) throw DimensionError("extract_subspace requires order >= 4");
  if (!(policy.relative_tol > 0)) throw DimensionError("rank tolerance must be positive");
  const int n = t.order() / 2;
  const Spectrum sp = method == EigenMethod::packed ? packed_spectrum(t, n) : dense_spectrum(t);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(sp.values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(sp.values[a]) > std::abs(sp.values[b]);
  });
  const double top = order.empty() ? 0.0 : std::abs(sp.values[order.front()]);

  std::size_t keep = 0;
  if (policy.fixed_rank) {
    if (*policy.fixed_rank < 0) throw DimensionError("fixed rank must be non-negative");
    keep = std::min(order.size(), static_cast<std::size_t>(*policy.fixed_rank));
  } else if (top > 0) {
    while (keep < order.size() && std::abs(sp.values[order[keep]]) > policy.relative_tol * top) ++keep;
  }

  SubspaceState s;
  s.n = n;
  s.length = t.length();
  s.basis.resize(sp.vectors.rows(), static_cast<Eigen::Index>(keep));
  s.inverse = Matrix::Zero(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(keep));
  for (std::size_t i = 0; i < keep; ++i) {
    const double d = sp.values[order[i]];
    if (!(std::abs(d) > policy.relative_tol * top))
      throw NumericalError("requested rank exceeds the numerical rank of the flattening");
    s.basis.col(static_cast<Eigen::Index>(i)) = sp.vectors.col(order[i]);
    s.inverse(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0 / d;
  }
  return s;
}

Vector partial_power(const Vector& x, int n) { return vectorize(tensor_power(x, n - 1)); }

Matrix pulled_columns(const SubspaceState& s, const Vector& x) {
  if (x.size() != s.length) throw DimensionError("vector length != subspace length");
  const Vector z = partial_power(x, s.n);
  Matrix out;
  kernels::pull_rows(s.basis, std::span<const double>(z.data(), static_cast<std::size_t>(z.size())), s.length, out);
  return out;
}

Pull project_pull(const SubspaceState& s, const Vector& x) {
  const Matrix w = pulled_columns(s, x);
  Pull p;
  p.coords = w.transpose() * x;
  p.pulled = w * p.coords;
  p.value = p.coords.squaredNorm();
  return p;
}

double objective(const SubspaceState& s, const Vector& x) { return project_pull(s, x).value; }

double membership_residual(const SubspaceState& s, const Vector& a) {
  const double norm2n = std::pow(a.squaredNorm(), s.n);
  return std::max(0.0, norm2n - objective(s, a));
}

}  // namespace spm
