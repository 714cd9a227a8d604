#include <doctest.h>
#include <omp.h>

#include <cstring>

#include "oracles.hpp"
#include "spm/kernels.hpp"
#include "spm/multi_index.hpp"

using namespace spm;

namespace {

bool bit_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(double)) == 0;
}

struct Threads {
  int saved = omp_get_max_threads();
  explicit Threads(int n) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("pull_rows against the explicit contraction") {
  std::mt19937_64 rng(1);
  const int length = 4;
  const Matrix v = oracle::random_matrix(length * length * length, 5, rng);
  const Vector z = oracle::random_vector(length * length, rng);
  Matrix out;
  kernels::serial::pull_rows(v, {z.data(), static_cast<std::size_t>(z.size())}, length, out);
  REQUIRE(out.rows() == length);
  REQUIRE(out.cols() == 5);
  for (int j = 0; j < 5; ++j)
    for (int c = 0; c < length; ++c) {
      double s = 0.0;
      for (int a = 0; a < length * length; ++a) s += v(a * length + c, j) * z[a];
      CHECK(out(c, j) == doctest::Approx(s).epsilon(1e-13));
    }
  Matrix bad = oracle::random_matrix(10, 2, rng);
  CHECK_THROWS(kernels::serial::pull_rows(bad, {z.data(), 16}, length, out));
}

TEST_CASE("reflect_right against the dense reflection") {
  std::mt19937_64 rng(2);
  for (int rows : {7, 300, 700}) {
    Matrix v = oracle::random_matrix(rows, 9, rng);
    const Vector x = oracle::random_vector(9, rng).normalized();
    const Matrix expect = v * (Matrix::Identity(9, 9) - 2.0 * x * x.transpose());
    kernels::serial::reflect_right(v, x);
    CHECK((v - expect).norm() < 1e-12 * expect.norm());
  }
}

TEST_CASE("moment_sums against nested loops") {
  std::mt19937_64 rng(3);
  for (int order : {2, 3, 4}) {
    const Matrix pts = oracle::random_matrix(3, 5000, rng);
    const auto sorted = sorted_multi_indices(3, order);
    std::vector<int> table;
    for (const auto& s : sorted) table.insert(table.end(), s.entries.begin(), s.entries.end());
    std::vector<double> sums(sorted.size());
    kernels::serial::moment_sums(pts, table, order, sums);
    for (std::size_t t = 0; t < sorted.size(); ++t) {
      double s = 0.0;
      for (Eigen::Index p = 0; p < pts.cols(); ++p) {
        double prod = 1.0;
        for (int e : sorted[t].entries) prod *= pts(e, p);
        s += prod;
      }
      CHECK(sums[t] == doctest::Approx(s).epsilon(1e-11));
    }
  }
}

TEST_CASE("serial and OpenMP kernels are bit-identical") {
  std::mt19937_64 rng(4);
  for (int threads : {1, 3, 4}) {
    Threads guard(threads);
    const int length = 20;
    const Matrix v = oracle::random_matrix(length * length, 300, rng);
    const Vector z = oracle::random_vector(length, rng);
    Matrix a, b;
    kernels::serial::pull_rows(v, {z.data(), 20}, length, a);
    kernels::omp::pull_rows(v, {z.data(), 20}, length, b);
    CHECK(bit_equal(a, b));

    Matrix w1 = v, w2 = v;
    const Vector x = oracle::random_vector(300, rng).normalized();
    kernels::serial::reflect_right(w1, x);
    kernels::omp::reflect_right(w2, x);
    CHECK(bit_equal(w1, w2));

    const Matrix pts = oracle::random_matrix(5, 3 * static_cast<int>(kernels::kMomentChunk) + 17, rng);
    const auto sorted = sorted_multi_indices(5, 4);
    std::vector<int> table;
    for (const auto& s : sorted) table.insert(table.end(), s.entries.begin(), s.entries.end());
    std::vector<double> s1(sorted.size()), s2(sorted.size());
    kernels::serial::moment_sums(pts, table, 4, s1);
    kernels::omp::moment_sums(pts, table, 4, s2);
    CHECK(std::memcmp(s1.data(), s2.data(), s1.size() * sizeof(double)) == 0);
  }
}
