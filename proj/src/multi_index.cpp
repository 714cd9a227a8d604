#include "spm/multi_index.hpp"

#include <algorithm>
#include <limits>

#include "spm/error.hpp"

namespace spm {

std::size_t ipow(std::size_t base, int exponent) {
  if (exponent < 0) throw DimensionError("negative exponent");
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base)
      throw DimensionError("tensor size overflows size_t");
    out *= base;
  }
  return out;
}

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return out;
}

std::size_t ravel(std::span<const int> index, int length) {
  std::size_t lin = 0;
  for (int j : index) lin = lin * static_cast<std::size_t>(length) + static_cast<std::size_t>(j);
  return lin;
}

void unravel(std::size_t linear, int length, std::span<int> out) {
  const auto len = static_cast<std::size_t>(length);
  for (std::size_t t = out.size(); t-- > 0;) {
    out[t] = static_cast<int>(linear % len);
    linear /= len;
  }
}

std::int64_t multiplicity_of(std::span<const int> e) {
  std::int64_t num = 1;
  for (std::size_t i = 2; i <= e.size(); ++i) num *= static_cast<std::int64_t>(i);
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i;
    while (j < e.size() && e[j] == e[i]) ++j;
    for (std::size_t f = 2; f <= j - i; ++f) num /= static_cast<std::int64_t>(f);
    i = j;
  }
  return num;
}

std::vector<SortedMultiIndex> sorted_multi_indices(int ell, int n) {
  std::vector<SortedMultiIndex> out;
  if (ell <= 0 || n < 0) return out;
  out.reserve(binomial(ell + n - 1, n));
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back({cur, multiplicity_of(cur)});
    // next non-decreasing tuple in lexicographic order
    int pos = n - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == ell - 1) --pos;
    if (pos < 0) break;
    const int v = cur[static_cast<std::size_t>(pos)] + 1;
    for (int t = pos; t < n; ++t) cur[static_cast<std::size_t>(t)] = v;
  }
  return out;
}

std::size_t canonical_linear(std::size_t linear, int order, int length) {
  int buf[64];
  if (order > 64) throw DimensionError("order too large");
  std::span<int> idx(buf, static_cast<std::size_t>(order));
  unravel(linear, length, idx);
  std::sort(idx.begin(), idx.end());
  return ravel(idx, length);
}

}  // namespace spm
