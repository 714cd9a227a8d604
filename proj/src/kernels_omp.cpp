#include <omp.h>

#include "kernels_detail.hpp"
#include "spm/kernels.hpp"

namespace spm::kernels::omp {

namespace {
// Below this many multiply-adds a parallel region costs more than it saves.
constexpr double kParallelWork = 1 << 16;
}

void pull_rows(const Matrix& v, std::span<const double> z, int length, Matrix& out) {
  detail::check_pull(v, z, length);
  out.resize(length, v.cols());
  const Eigen::Index cols = v.cols();
  const bool big = static_cast<double>(v.size()) > kParallelWork;
#pragma omp parallel for schedule(static) if (big)
  for (Eigen::Index j = 0; j < cols; ++j) detail::pull_column(v.col(j).data(), z, length, out.col(j).data());
}

void reflect_right(Matrix& v, const Vector& x) {
  const Eigen::Index blocks = (v.rows() + detail::kReflectRowBlock - 1) / detail::kReflectRowBlock;
  const bool big = static_cast<double>(v.size()) > kParallelWork;
#pragma omp parallel for schedule(static) if (big)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index lo = b * detail::kReflectRowBlock;
    detail::reflect_rows(v, x, lo, std::min(v.rows(), lo + detail::kReflectRowBlock));
  }
}

void moment_sums(const Matrix& points, std::span<const int> table, int order, std::span<double> sums) {
  const std::size_t count = table.size() / static_cast<std::size_t>(order);
  const Eigen::Index chunks = (points.cols() + kMomentChunk - 1) / kMomentChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks) * count);
#pragma omp parallel for schedule(dynamic) if (chunks > 1)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index b = c * kMomentChunk;
    detail::moment_chunk(points, table, order, b, std::min(points.cols(), b + kMomentChunk),
                         partial.data() + static_cast<std::size_t>(c) * count);
  }
  std::fill(sums.begin(), sums.end(), 0.0);
  for (Eigen::Index c = 0; c < chunks; ++c)
    for (std::size_t t = 0; t < count; ++t) sums[t] += partial[static_cast<std::size_t>(c) * count + t];
}

}  // namespace spm::kernels::omp
