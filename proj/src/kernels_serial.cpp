#include "kernels_detail.hpp"
#include "spm/kernels.hpp"

namespace spm::kernels::serial {

void pull_rows(const Matrix& v, std::span<const double> z, int length, Matrix& out) {
  detail::check_pull(v, z, length);
  out.resize(length, v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) detail::pull_column(v.col(j).data(), z, length, out.col(j).data());
}

void reflect_right(Matrix& v, const Vector& x) {
  for (Eigen::Index lo = 0; lo < v.rows(); lo += detail::kReflectRowBlock)
    detail::reflect_rows(v, x, lo, std::min(v.rows(), lo + detail::kReflectRowBlock));
}

void moment_sums(const Matrix& points, std::span<const int> table, int order, std::span<double> sums) {
  const std::size_t count = table.size() / static_cast<std::size_t>(order);
  std::fill(sums.begin(), sums.end(), 0.0);
  std::vector<double> partial(count);
  for (Eigen::Index b = 0; b < points.cols(); b += kMomentChunk) {
    detail::moment_chunk(points, table, order, b, std::min(points.cols(), b + kMomentChunk), partial.data());
    for (std::size_t t = 0; t < count; ++t) sums[t] += partial[t];
  }
}

}  // namespace spm::kernels::serial
