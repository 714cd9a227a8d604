#pragma once

#include <optional>

#include "spm/tensor.hpp"

namespace spm {

/// Orthonormal basis V (L^n x r) of the extracted subspace together with
/// C = D^{-1}, where mat(T) = V D V^T restricted to what is still undeflated.
struct SubspaceState {
  Matrix basis;   // V
  Matrix inverse; // C, r x r symmetric
  int n = 0;
  int length = 0;

  int rank() const noexcept { return static_cast<int>(basis.cols()); }
};

struct RankPolicy {
  double relative_tol = 1e-10;
  std::optional<int> fixed_rank;
};

enum class EigenMethod {
  // Eigendecomposition restricted to the symmetric subspace of R^{L^n}
  // (size binom(L+n-1, n)); identical nonzero spectrum, much cheaper.
  packed,
  // Full L^n x L^n solve; kept as a reference.
  dense,
};

/// Thin eigendecomposition of mat(T), keeping eigenpairs with
/// |d| > relative_tol * max|d| (or the fixed_rank largest |d|), ordered by
/// descending |d|. A zero tensor yields rank 0. A fixed rank that would keep
/// an eigenvalue below the cutoff is an error.
SubspaceState extract_subspace(const SymTensor& t, const RankPolicy& policy = {},
                               EigenMethod method = EigenMethod::packed);

/// Orthonormal basis (L^n x binom(L+n-1, n)) of the symmetric tensors inside
/// R^{L^n}; column I is vec(Sym(e_I)) normalized, sorted multi-indices in
/// lexicographic order.
Matrix symmetric_basis(int length, int n);

/// Full eigendecomposition of mat(T) restricted to the symmetric subspace,
/// eigenvalues ascending, eigenvectors as unit vectors of R^{L^n}.
struct SymmetricSpectrum {
  Vector values;
  Matrix vectors;
};
SymmetricSpectrum symmetric_eigen(const SymTensor& t);

struct Pull {
  Vector coords;  // g = V^T vec(x^{(x)n})
  Vector pulled;  // y = <P_A(x^{(x)n}), x^{(x)(n-1)}>
  double value = 0.0;  // f = |g|^2
};

/// vec(x^{(x)(n-1)}).
Vector partial_power(const Vector& x, int n);

/// L x r matrix whose column j is unvec(V_j) . x^{(x)(n-1)}.
Matrix pulled_columns(const SubspaceState& s, const Vector& x);

Pull project_pull(const SubspaceState& s, const Vector& x);

/// f(x) = |P_A(x^{(x)n})|^2.
double objective(const SubspaceState& s, const Vector& x);

/// |(I - V V^T) vec(a^{(x)n})|^2 for unit a.
double membership_residual(const SubspaceState& s, const Vector& a);

}  // namespace spm
