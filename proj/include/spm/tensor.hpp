#pragma once

// Dense tensors in lexicographic layout and the multilinear algebra used by
// the decomposition drivers: symmetrization, tensor powers, contractions,
// square flattenings, Khatri-Rao / star powers and symmetric Tucker products.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace spm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Order-m, length-L real tensor with L^m entries, first index most significant.
/// Order 0 is a scalar (one entry).
class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(int order, int length);
  DenseTensor(int order, int length, std::vector<double> data);

  int order() const noexcept { return order_; }
  int length() const noexcept { return length_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  double at(std::span<const int> index) const;
  double& at(std::span<const int> index);

  double norm() const;

 private:
  int order_ = 0;
  int length_ = 0;
  std::vector<double> data_{0.0};
};

/// A DenseTensor that is invariant under every permutation of its indices.
/// Every constructor either builds a symmetric tensor by construction or
/// validates its input.
class SymTensor {
 public:
  SymTensor() = default;
  /// Zero tensor.
  SymTensor(int order, int length);

  /// Validates symmetry to `tol` relative to max(1, max |entry|) and throws
  /// DimensionError otherwise. Each entry is replaced by its canonical
  /// (sorted index) representative, so symmetric input is stored unchanged.
  static SymTensor from_dense(const DenseTensor& t, double tol = 1e-10);
  static SymTensor from_data(int order, int length, std::vector<double> data, double tol = 1e-10);

  /// Caller guarantees exact symmetry (used by kernels that fill whole orbits).
  static SymTensor unchecked(DenseTensor t);

  const DenseTensor& dense() const noexcept { return t_; }
  int order() const noexcept { return t_.order(); }
  int length() const noexcept { return t_.length(); }
  std::size_t size() const noexcept { return t_.size(); }
  std::span<const double> data() const noexcept { return t_.data(); }
  double operator[](std::size_t i) const { return t_[i]; }
  double at(std::span<const int> index) const { return t_.at(index); }
  double norm() const { return t_.norm(); }

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double s);

  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }

 private:
  explicit SymTensor(DenseTensor t) : t_(std::move(t)) {}
  DenseTensor t_;
};

/// Average over all m! index permutations.
SymTensor symmetrize(const DenseTensor& t);

/// v^{(x)m}.
SymTensor tensor_power(const Vector& v, int m);

/// Tensor (outer) product, order m + m'.
DenseTensor outer(const DenseTensor& t, const DenseTensor& u);

/// Contraction of the first order(u) indices of t against u; order(t) - order(u).
DenseTensor contract(const DenseTensor& t, const DenseTensor& u);

/// Frobenius inner product of equal-shape tensors.
double inner(const DenseTensor& t, const DenseTensor& u);

/// Square flattening of an even-order tensor as an L^n x L^n view into the
/// tensor's storage (no copy). Valid only while `t` is alive.
Eigen::Map<const RowMajorMatrix> flatten_mat(const SymTensor& t);

Vector vectorize(const SymTensor& u);
SymTensor unvectorize(const Vector& v, int order, int length);

/// Columns vec(a_i^{(x)n}).
Matrix khatri_rao_power(const Matrix& a, int n);

/// Columns vec(Sym(a_{j1} (x) ... (x) a_{jn})) over sorted (j1 <= ... <= jn),
/// lexicographic order; binom(ell + n - 1, n) columns.
Matrix star_power(const Matrix& a, int n);

/// (A; ...; A) . core, i.e. every mode multiplied by A (L x ell).
SymTensor tucker_apply(const Matrix& a, const SymTensor& core);

/// K x K matrix with mat(tucker_apply(A, core)) = A*n . M . (A*n)^T, K = binom(ell+n-1, n).
Matrix core_to_matrix(const SymTensor& core);

/// Inverse of core_to_matrix; each core entry is the average over all sorted
/// splits (I, J) of its multi-index of M(I, J) / (mu(I) mu(J)).
SymTensor matrix_to_core(const Matrix& m, int n, int ell);

struct CpComponent {
  double weight = 0.0;
  Vector vector;
};

/// Unit-norm components with canonical sign (first nonzero entry positive).
struct CPDecomposition {
  std::vector<CpComponent> components;
};

struct TuckerBlock {
  Matrix factor;  // L x ell, orthonormal columns
  SymTensor core; // order 2n, length ell
};

struct BlockTermDecomposition {
  int order = 0;
  int length = 0;
  std::vector<TuckerBlock> blocks;
};

/// Flips v so its first entry with |v_j| > 1e-14 is positive.
void canonicalize_sign(Vector& v);

SymTensor cp_reconstruct(const CPDecomposition& d, int order, int length);
SymTensor btd_reconstruct(const BlockTermDecomposition& d);

/// Orthogonal projector onto colspan(basis) for a basis with orthonormal columns.
Matrix projector(const Matrix& orthonormal_basis);

}  // namespace spm
