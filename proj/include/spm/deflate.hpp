#pragma once

#include <optional>
#include <vector>

#include "spm/spectral.hpp"

namespace spm {

/// Product H_{x_1} ... H_{x_k} of reflections H = I - 2 x x^T.
struct HouseholderSeq {
  std::vector<Vector> reflections;

  Matrix dense(Eigen::Index size) const;
};

/// Householder QR of y (r x k, fixed column order): returns the reflections
/// whose product Q has colspan(Q[:, :k]) = colspan(y).
HouseholderSeq householder_qr(const Matrix& y);

/// Single reflection H with H e_r = y for a unit vector y. The sign of y is
/// flipped when y_r > 0 so that x_r never suffers cancellation.
Vector householder_to_last(Vector y);

/// (alpha^T C alpha)^{-1}.
double solve_lambda(const Matrix& c, const Vector& alpha);

/// (alpha^T C alpha)^{-1}, symmetric.
Matrix solve_block_lambda(const Matrix& c, const Matrix& alpha);

struct CpDeflation {
  SubspaceState state;
  double lambda = 0.0;
};

struct BlockDeflation {
  SubspaceState state;
  Matrix core_matrix;  // K x K, K = binom(ell + n - 1, n)
};

/// Removes lambda a^{(x)2n} from the state. With a membership tolerance the
/// residual of a is checked first.
CpDeflation deflate_cp(const SubspaceState& s, const Vector& a, std::optional<double> membership_tol = 1e-6);

/// Removes the block spanned by star_power(A, n).
BlockDeflation deflate_btd(const SubspaceState& s, const Matrix& a, std::optional<double> membership_tol = 1e-6);

/// Reference: explicit subtraction from the full tensor.
SymTensor deflate_naive(const SymTensor& t, const Vector& a, double lambda);
SymTensor deflate_naive(const SymTensor& t, const Matrix& a, const SymTensor& core);

}  // namespace spm
