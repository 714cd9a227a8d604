#pragma once

#include <vector>

#include "spm/tensor.hpp"

namespace spm {

/// Minimum-cost perfect matching for a square cost matrix (Hungarian method).
/// Returns col[i], the column assigned to row i.
std::vector<int> solve_assignment(const Matrix& cost);

double assignment_cost(const Matrix& cost, const std::vector<int>& col);

}  // namespace spm
