#pragma once

// Per-output work items shared by the serial and OpenMP kernels. Keeping a
// single definition is what makes the two variants bit-identical.

#include <algorithm>
#include <span>
#include <vector>

#include "spm/error.hpp"
#include "spm/tensor.hpp"

namespace spm::kernels::detail {

inline constexpr Eigen::Index kReflectRowBlock = 256;

inline void check_pull(const Matrix& v, std::span<const double> z, int length) {
  if (static_cast<std::size_t>(v.rows()) != z.size() * static_cast<std::size_t>(length))
    throw DimensionError("pull_rows: V rows != L^{n-1} * L");
}

inline void pull_column(const double* col, std::span<const double> z, int length, double* acc) {
  std::fill(acc, acc + length, 0.0);
  for (std::size_t a = 0; a < z.size(); ++a) {
    const double za = z[a];
    const double* row = col + a * static_cast<std::size_t>(length);
    for (int c = 0; c < length; ++c) acc[c] += row[c] * za;
  }
}

// Rows [lo, hi) of v <- v (I - 2 x x^T).
inline void reflect_rows(Matrix& v, const Vector& x, Eigen::Index lo, Eigen::Index hi) {
  const Eigen::Index cols = v.cols();
  double w[kReflectRowBlock];
  std::fill(w, w + (hi - lo), 0.0);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double xj = x[j];
    const double* cj = v.col(j).data();
    for (Eigen::Index i = lo; i < hi; ++i) w[i - lo] += cj[i] * xj;
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double s = 2.0 * x[j];
    double* cj = v.col(j).data();
    for (Eigen::Index i = lo; i < hi; ++i) cj[i] -= w[i - lo] * s;
  }
}

template <int Order>
void moment_chunk_fixed(const Matrix& points, std::span<const int> table, Eigen::Index begin, Eigen::Index end,
                        double* partial) {
  const std::size_t count = table.size() / Order;
  for (Eigen::Index p = begin; p < end; ++p) {
    const double* y = points.col(p).data();
    const int* row = table.data();
    for (std::size_t t = 0; t < count; ++t, row += Order) {
      double prod = y[row[0]];
      for (int k = 1; k < Order; ++k) prod *= y[row[k]];
      partial[t] += prod;
    }
  }
}

// Out of line on purpose: inlined into an OpenMP outlined region it ran at
// half speed (aliasing through the shared captures).
[[gnu::noinline]] inline void moment_chunk(const Matrix& points, std::span<const int> table, int order,
                                           Eigen::Index begin, Eigen::Index end, double* partial) {
  const std::size_t count = table.size() / static_cast<std::size_t>(order);
  std::fill(partial, partial + count, 0.0);
  switch (order) {
    case 2: return moment_chunk_fixed<2>(points, table, begin, end, partial);
    case 4: return moment_chunk_fixed<4>(points, table, begin, end, partial);
    case 6: return moment_chunk_fixed<6>(points, table, begin, end, partial);
    default: break;
  }
  for (Eigen::Index p = begin; p < end; ++p) {
    const double* y = points.col(p).data();
    const int* row = table.data();
    for (std::size_t t = 0; t < count; ++t, row += order) {
      double prod = 1.0;
      for (int k = 0; k < order; ++k) prod *= y[row[k]];
      partial[t] += prod;
    }
  }
}

}  // namespace spm::kernels::detail
