#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spm/assignment.hpp"
#include "spm/error.hpp"
#include "spm/gpca.hpp"
#include "spm/synth.hpp"

using namespace spm;

namespace {

SubspaceArrangement random_arrangement(int length, std::vector<int> dims, Rng& rng) {
  SubspaceArrangement a;
  for (int d : dims) a.bases.push_back(random_orthonormal(length, d, rng));
  return a;
}

PointCloud gaussian_cloud(int length, int n, double sigma, Rng& rng) {
  std::normal_distribution<double> g(0.0, sigma);
  PointCloud c;
  c.points.resize(length, n);
  for (Eigen::Index j = 0; j < c.points.cols(); ++j)
    for (Eigen::Index i = 0; i < c.points.rows(); ++i) c.points(i, j) = g(rng);
  return c;
}

SymTensor iso2(int length) {
  DenseTensor id(2, length);
  for (int i = 0; i < length; ++i) id[static_cast<std::size_t>(i) * length + i] = 1.0;
  return SymTensor::from_dense(id);
}

// Monte-Carlo standard error of the sample mean of y^{(x)4}, in Frobenius norm.
double moment_sampling_error(const PointCloud& c, const SymTensor& m4) {
  double s8 = 0.0;
  for (int j = 0; j < c.size(); ++j) s8 += std::pow(c.points.col(j).squaredNorm(), 4);
  const double mean8 = s8 / c.size();
  return std::sqrt(std::max(0.0, mean8 - std::pow(m4.dense().norm(), 2)) / c.size());
}

}  // namespace

TEST_CASE("sample_moment") {
  std::mt19937_64 rng(1);
  const Vector y = oracle::random_vector(4, rng);
  PointCloud one{Matrix(y), {}};
  CHECK(oracle::max_abs_diff(sample_moment(one, 4).dense(), oracle::power(y, 4)) < 1e-14);
  PointCloud two;
  two.points.resize(4, 2);
  two.points.col(0) = y;
  two.points.col(1) = -y;
  CHECK(oracle::max_abs_diff(sample_moment(two, 4).dense(), oracle::power(y, 4)) < 1e-14);
  CHECK(oracle::max_abs_diff(sample_moment(two, 2).dense(), oracle::power(y, 2)) < 1e-14);

  PointCloud ten{oracle::random_matrix(4, 10, rng), {}};
  for (int order : {2, 3, 4}) {
    DenseTensor avg = oracle::power(ten.points.col(0), order);
    for (int j = 1; j < 10; ++j) {
      const DenseTensor p = oracle::power(ten.points.col(j), order);
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += p[i];
    }
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] /= 10.0;
    CHECK(oracle::max_abs_diff(sample_moment(ten, order).dense(), avg) < 1e-13);
  }
  CHECK_THROWS_AS(sample_moment(PointCloud{Matrix(4, 0), {}}, 4), DimensionError);
}

TEST_CASE("debias_moments") {
  Rng rng(2);
  {
    const PointCloud c = gaussian_cloud(4, 50, 1.0, rng);
    const SymTensor m2 = sample_moment(c, 2), m4 = sample_moment(c, 4);
    const DebiasedMoments z = debias_moments(m2, m4, 0.0);
    CHECK(oracle::max_abs_diff(z.m4.dense(), m4.dense()) == 0.0);
    CHECK(oracle::max_abs_diff(z.m2.dense(), m2.dense()) == 0.0);
  }
  {
    // pure noise: the debiased fourth moment vanishes up to sampling error
    const PointCloud c = gaussian_cloud(4, 100000, 1.0, rng);
    const SymTensor m2 = sample_moment(c, 2), m4 = sample_moment(c, 4);
    const DebiasedMoments z = debias_moments(m2, m4, 1.0);
    const double se = moment_sampling_error(c, m4);
    CHECK(z.m4.dense().norm() <= 5 * se);
    // population check of the formula itself: E[y^4] = 3 Sym(I (x) I)
    const SymTensor id = iso2(4);
    const SymTensor pop4 = 3.0 * symmetrize(outer(id.dense(), id.dense()));
    const DebiasedMoments zp = debias_moments(id, pop4, 1.0);
    CHECK(zp.m4.dense().norm() < 1e-13);
    CHECK(zp.m2.dense().norm() < 1e-14);
  }
  {
    Rng r(3);
    const SubspaceArrangement arr = random_arrangement(6, {3, 3}, r);
    const PointCloud clean = sample_arrangement(arr, 100000, 0.0, r);
    PointCloud noisy = clean;
    noisy.points += gaussian_cloud(6, clean.size(), 0.1, r).points;
    const SymTensor m4c = sample_moment(clean, 4);
    const DebiasedMoments z = debias_moments(sample_moment(noisy, 2), sample_moment(noisy, 4), 0.1);
    CHECK((z.m4.dense().norm() > 0));
    DenseTensor diff = z.m4.dense();
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= m4c.dense()[i];
    CHECK(diff.norm() / m4c.dense().norm() <= 0.05);
  }
}

TEST_CASE("estimate_sigma") {
  Rng rng(4);
  const SubspaceArrangement arr = random_arrangement(6, {3, 3}, rng);
  const PointCloud clean = sample_arrangement(arr, 2000, 0.0, rng);
  CHECK(estimate_sigma(sample_moment(clean, 2), sample_moment(clean, 4)) < 1e-6);

  const PointCloud noisy = sample_arrangement(arr, 100000, 0.1, rng);
  const SymTensor m2 = sample_moment(noisy, 2), m4 = sample_moment(noisy, 4);
  const double s = estimate_sigma(m2, m4);
  CHECK(s >= 0.08);
  CHECK(s <= 0.12);

  PointCloud scaled = noisy;
  scaled.points *= 10.0;
  CHECK(estimate_sigma(sample_moment(scaled, 2), sample_moment(scaled, 4)) == doctest::Approx(10 * s).epsilon(1e-8));
}

TEST_CASE("moments of points on an arrangement have low flattening rank") {
  Rng rng(5);
  const SubspaceArrangement arr = random_arrangement(6, {2, 2}, rng);
  const PointCloud c = sample_arrangement(arr, 100, 0.0, rng);
  CHECK(oracle::svd_rank(Matrix(flatten_mat(sample_moment(c, 4)))) <= 6);
}

TEST_CASE("fit_subspaces on noiseless data") {
  Rng rng(6);
  const SubspaceArrangement arr = random_arrangement(6, {2, 2}, rng);
  const PointCloud c = sample_arrangement(arr, 2000, 0.0, rng);
  const GpcaFit fit = fit_subspaces(c);
  REQUIRE(fit.arrangement.bases.size() == 2);
  CHECK(subspace_error(arr, fit.arrangement) <= 1e-3);
  CHECK(misclassification_error(c.labels, classify(c, fit.arrangement)) == 0.0);

  const SubspaceArrangement single = random_arrangement(5, {2}, rng);
  const PointCloud s = sample_arrangement(single, 500, 0.0, rng);
  const GpcaFit f1 = fit_subspaces(s);
  REQUIRE(f1.arrangement.bases.size() == 1);
  CHECK(subspace_error(single, f1.arrangement) <= 1e-6);
}

TEST_CASE("classify") {
  SubspaceArrangement arr;
  arr.bases.push_back(Matrix(Vector::Unit(2, 0)));
  arr.bases.push_back(Matrix(Vector::Unit(2, 1)));
  PointCloud c;
  c.points.resize(2, 3);
  c.points.col(0) << 2.0, 0.1;
  c.points.col(1) << 0.1, -3.0;
  c.points.col(2) << 1.0, 1.0;
  CHECK(classify(c, arr) == std::vector<int>{0, 1, 0});
  // basis choice does not matter
  SubspaceArrangement flipped = arr;
  flipped.bases[0] *= -1.0;
  CHECK(classify(c, flipped) == classify(c, arr));
  CHECK_THROWS_AS(classify(c, SubspaceArrangement{}), DimensionError);
}

TEST_CASE("subspace_error") {
  SubspaceArrangement a, b;
  a.bases = {Matrix(Vector::Unit(2, 0)), Matrix(Vector::Unit(2, 1))};
  b.bases = {a.bases[1], a.bases[0]};
  CHECK(subspace_error(a, a) == 0.0);
  CHECK(subspace_error(a, b) == doctest::Approx(0.0));
  SubspaceArrangement l1, l2;
  l1.bases = {Matrix(Vector::Unit(2, 0))};
  l2.bases = {Matrix(Vector::Unit(2, 1))};
  CHECK(subspace_error(l1, l2) == doctest::Approx(std::sqrt(2.0)));
  Rng rng(7);
  const SubspaceArrangement r1 = random_arrangement(5, {2, 1, 2}, rng), r2 = random_arrangement(5, {2, 1, 2}, rng);
  CHECK(subspace_error(r1, r2) == doctest::Approx(subspace_error(r2, r1)));
  CHECK_THROWS_AS(subspace_error(l1, a), DimensionError);
}

TEST_CASE("misclassification_error") {
  const std::vector<int> t{0, 0, 1, 1, 2};
  CHECK(misclassification_error(t, t) == 0.0);
  CHECK(misclassification_error({0, 1, 1, 0}, {1, 0, 0, 1}) == 0.0);
  CHECK(misclassification_error({0, 0, 1, 1}, {0, 1, 1, 1}) == doctest::Approx(0.25));
  std::mt19937_64 rng(8);
  std::bernoulli_distribution coin(0.5);
  std::vector<int> u(10000), v(10000);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = coin(rng);
    v[i] = coin(rng);
  }
  CHECK(std::abs(misclassification_error(u, v) - 0.5) <= 0.02);
}

TEST_CASE("assignment matches brute force") {
  std::mt19937_64 rng(9);
  for (int k = 1; k <= 7; ++k)
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix cost = oracle::random_matrix(k, k, rng);
      const auto col = solve_assignment(cost);
      std::vector<int> sorted = col;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < k; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
      CHECK(assignment_cost(cost, col) == doctest::Approx(oracle::brute_force_assignment(cost)).epsilon(1e-12));
    }
}
