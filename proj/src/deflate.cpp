#include "spm/deflate.hpp"

#include <cmath>

#include "spm/error.hpp"
#include "spm/kernels.hpp"

namespace spm {

namespace {

constexpr double kDegenerate = 1e-14;
constexpr double kMaxCondition = 1e12;

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Matrix HouseholderSeq::dense(Eigen::Index size) const {
  Matrix q = Matrix::Identity(size, size);
  for (const Vector& x : reflections) q -= 2.0 * (q * x) * x.transpose();
  return q;
}

HouseholderSeq householder_qr(const Matrix& y) {
  const Eigen::Index r = y.rows(), k = y.cols();
  if (k > r) throw DimensionError("householder_qr: more columns than rows");
  HouseholderSeq seq;
  Matrix w = y;
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector x = Vector::Zero(r);
    x.tail(r - j) = w.col(j).tail(r - j);
    const double nrm = x.norm();
    if (!(nrm > kDegenerate * std::max(1.0, w.norm())))
      throw NumericalError("degenerate deflation: rank-deficient block");
    x[j] += x[j] >= 0 ? nrm : -nrm;
    x.normalize();
    w -= 2.0 * x * (x.transpose() * w);
    seq.reflections.push_back(std::move(x));
  }
  return seq;
}

Vector householder_to_last(Vector y) {
  const Eigen::Index r = y.size();
  if (y[r - 1] > 0) y = -y;
  const double xr = std::sqrt((1.0 - y[r - 1]) / 2.0);
  Vector x = -y / (2.0 * xr);
  x[r - 1] = xr;
  return x;
}

double solve_lambda(const Matrix& c, const Vector& alpha) {
  if (c.rows() != alpha.size() || c.cols() != alpha.size()) throw DimensionError("solve_lambda: shape mismatch");
  const double q = alpha.dot(c * alpha);
  if (!(std::abs(q) >= kDegenerate)) throw NumericalError("degenerate deflation: alpha^T C alpha vanishes");
  return 1.0 / q;
}

Matrix solve_block_lambda(const Matrix& c, const Matrix& alpha) {
  if (c.rows() != alpha.rows() || c.cols() != alpha.rows()) throw DimensionError("solve_block_lambda: shape mismatch");
  const Matrix g = symmetric_part(alpha.transpose() * c * alpha);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in solve_block_lambda");
  const Vector& e = es.eigenvalues();
  const double hi = e.cwiseAbs().maxCoeff(), lo = e.cwiseAbs().minCoeff();
  if (!(hi >= kDegenerate) || !(lo > 0) || hi / lo > kMaxCondition)
    throw NumericalError("degenerate deflation: alpha^T C alpha is singular");
  const Matrix& w = es.eigenvectors();
  return symmetric_part(w * e.cwiseInverse().asDiagonal() * w.transpose());
}

CpDeflation deflate_cp(const SubspaceState& s, const Vector& a, std::optional<double> membership_tol) {
  if (s.rank() == 0) throw NumericalError("deflation of an empty subspace");
  if (a.size() != s.length) throw DimensionError("deflate_cp: vector length mismatch");
  const Vector va = vectorize(tensor_power(a, s.n));
  const Vector alpha = s.basis.transpose() * va;
  if (membership_tol) {
    const double resid = std::max(0.0, va.squaredNorm() - alpha.squaredNorm());
    if (resid > *membership_tol) throw NumericalError("membership test failed: residual " + std::to_string(resid));
  }
  CpDeflation out;
  out.lambda = solve_lambda(s.inverse, alpha);
  const Vector ca = s.inverse * alpha;
  const Vector x = householder_to_last(ca.normalized());
  const Eigen::Index r = s.rank();

  Matrix v = s.basis;
  kernels::reflect_right(v, x);
  Matrix c = s.inverse;
  c -= 2.0 * x * (x.transpose() * c);
  c -= 2.0 * (c * x) * x.transpose();

  out.state.n = s.n;
  out.state.length = s.length;
  out.state.basis = v.leftCols(r - 1);
  out.state.inverse = symmetric_part(c.topLeftCorner(r - 1, r - 1));
  return out;
}

BlockDeflation deflate_btd(const SubspaceState& s, const Matrix& a, std::optional<double> membership_tol) {
  if (a.rows() != s.length) throw DimensionError("deflate_btd: factor length mismatch");
  const Matrix sp = star_power(a, s.n);
  const Eigen::Index k = sp.cols(), r = s.rank();
  if (k > r) throw NumericalError("inconsistent rank: block needs " + std::to_string(k) + " dimensions, " +
                                  std::to_string(r) + " remain");
  const Matrix alpha = s.basis.transpose() * sp;
  if (membership_tol) {
    const double resid = std::max(0.0, sp.squaredNorm() - alpha.squaredNorm()) / sp.squaredNorm();
    if (resid > *membership_tol) throw NumericalError("membership test failed: residual " + std::to_string(resid));
  }
  BlockDeflation out;
  out.core_matrix = solve_block_lambda(s.inverse, alpha);
  const HouseholderSeq seq = householder_qr(s.inverse * alpha);

  Matrix v = s.basis;
  Matrix c = s.inverse;
  for (const Vector& x : seq.reflections) {
    kernels::reflect_right(v, x);
    c -= 2.0 * x * (x.transpose() * c);
    c -= 2.0 * (c * x) * x.transpose();
  }
  out.state.n = s.n;
  out.state.length = s.length;
  out.state.basis = v.rightCols(r - k);
  out.state.inverse = symmetric_part(c.bottomRightCorner(r - k, r - k));
  return out;
}

SymTensor deflate_naive(const SymTensor& t, const Vector& a, double lambda) {
  return t - lambda * tensor_power(a, t.order());
}

SymTensor deflate_naive(const SymTensor& t, const Matrix& a, const SymTensor& core) {
  return t - tucker_apply(a, core);
}

}  // namespace spm
