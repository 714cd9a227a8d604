#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`. Both variants run
// the same per-output summation order, so their results are bit-identical and
// independent of the thread count.

#include <span>

#include "spm/tensor.hpp"

namespace spm::kernels {

/// out.col(j) = W_j^T z for every column V_j of `v`, where W_j is V_j read as
/// an L^{n-1} x L row-major block and `z` has length L^{n-1}. `out` is L x r.
/// With z = vec(x^{(x)(n-1)}), column j is unvec(V_j) contracted with x^{(x)(n-1)}.
using PullFn = void (*)(const Matrix& v, std::span<const double> z, int length, Matrix& out);

/// v <- v (I - 2 x x^T) for a unit vector x (one Householder reflection on the right).
using ReflectFn = void (*)(Matrix& v, const Vector& x);

/// Sums prod_t y_{i_t} over all points y (columns of `points`) for every sorted
/// multi-index (rows of `index_table`, `order` entries each). Points are
/// accumulated in fixed chunks merged in chunk order.
using MomentFn = void (*)(const Matrix& points, std::span<const int> index_table, int order,
                          std::span<double> sums);

inline constexpr Eigen::Index kMomentChunk = 2048;

namespace serial {
void pull_rows(const Matrix& v, std::span<const double> z, int length, Matrix& out);
void reflect_right(Matrix& v, const Vector& x);
void moment_sums(const Matrix& points, std::span<const int> index_table, int order, std::span<double> sums);
}  // namespace serial

namespace omp {
void pull_rows(const Matrix& v, std::span<const double> z, int length, Matrix& out);
void reflect_right(Matrix& v, const Vector& x);
void moment_sums(const Matrix& points, std::span<const int> index_table, int order, std::span<double> sums);
}  // namespace omp

// Variants used by the library.
inline void pull_rows(const Matrix& v, std::span<const double> z, int length, Matrix& out) {
  omp::pull_rows(v, z, length, out);
}
inline void reflect_right(Matrix& v, const Vector& x) { omp::reflect_right(v, x); }
inline void moment_sums(const Matrix& points, std::span<const int> index_table, int order,
                        std::span<double> sums) {
  omp::moment_sums(points, index_table, order, sums);
}

}  // namespace spm::kernels
