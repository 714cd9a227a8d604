#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spm {

/// L^m as a size, throwing DimensionError on overflow.
std::size_t ipow(std::size_t base, int exponent);

/// binom(n, k); exact for the sizes used here.
std::size_t binomial(int n, int k);

/// Lexicographic (first index most significant) position of `index` in [length]^m.
std::size_t ravel(std::span<const int> index, int length);

/// Inverse of ravel; writes m = out.size() digits.
void unravel(std::size_t linear, int length, std::span<int> out);

/// Non-decreasing tuple over [ell] together with the number of distinct
/// arrangements of its entries, n! / prod(repeat counts!).
struct SortedMultiIndex {
  std::vector<int> entries;
  std::int64_t multiplicity = 1;
};

/// Number of distinct arrangements of a sorted tuple.
std::int64_t multiplicity_of(std::span<const int> sorted_entries);

/// All sorted multi-indices of length n over [ell], lexicographic order.
/// There are binom(ell + n - 1, n) of them.
std::vector<SortedMultiIndex> sorted_multi_indices(int ell, int n);

/// Linear position of the sorted rearrangement of the multi-index at `linear`.
std::size_t canonical_linear(std::size_t linear, int order, int length);

}  // namespace spm
