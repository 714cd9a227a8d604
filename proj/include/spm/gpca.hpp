#pragma once

#include <optional>
#include <vector>

#include "spm/driver.hpp"

namespace spm {

struct PointCloud {
  Matrix points;            // L x N, one point per column
  std::vector<int> labels;  // optional ground truth, empty if unknown

  int length() const noexcept { return static_cast<int>(points.rows()); }
  int size() const noexcept { return static_cast<int>(points.cols()); }
};

struct SubspaceArrangement {
  std::vector<Matrix> bases;  // orthonormal columns
};

/// (1/N) sum_i y_i^{(x)order}.
SymTensor sample_moment(const PointCloud& cloud, int order);

struct DebiasedMoments {
  SymTensor m2;
  SymTensor m4;
};

/// Removes isotropic Gaussian noise of standard deviation sigma.
DebiasedMoments debias_moments(const SymTensor& m2, const SymTensor& m4, double sigma);

/// Noise level from the smallest eigenpair of mat(M4) on the symmetric subspace.
double estimate_sigma(const SymTensor& m2, const SymTensor& m4);

struct GpcaConfig {
  SpmConfig spm;
  std::optional<double> sigma;  // estimated when absent
};

struct GpcaFit {
  SubspaceArrangement arrangement;
  double sigma = 0.0;
  SpmStats stats;
};

GpcaFit fit_subspaces(const PointCloud& cloud, const GpcaConfig& cfg = {});

/// Index of the nearest subspace for every point; ties go to the lower index.
std::vector<int> classify(const PointCloud& cloud, const SubspaceArrangement& arrangement);

/// sqrt(min over matchings of sum |P_i - P_hat_pi(i)|_F^2).
double subspace_error(const SubspaceArrangement& truth, const SubspaceArrangement& estimate);

/// Fraction of mismatched labels under the best global relabeling.
double misclassification_error(const std::vector<int>& truth, const std::vector<int>& estimate);

}  // namespace spm
