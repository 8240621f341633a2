#pragma once

#include <array>
#include <utility>
#include <vector>

#include "gpcpd/tensor.hpp"

namespace gpcpd {

/// Two-block partition of the modes.  Both groups are sorted ascending and
/// linearized row-major.
struct FlattenPlan {
  std::vector<Index> group1;
  std::vector<Index> group2;
  Index rows = 0;
  Index cols = 0;
};

/// Most square two-block partition: minimizes |rows - cols| over partitions
/// where group1 contains mode 0; ties go to the lexicographically smallest
/// group1.
FlattenPlan most_square_plan(std::span<const Index> dims);

Matrix flatten(const DenseTensor& t, const FlattenPlan& plan);

std::pair<FlattenPlan, Matrix> most_square_flatten(const DenseTensor& t);

/// Singular values of the most square flattening, descending.  An order-1
/// tensor is treated as a single column.
Eigen::VectorXd flattening_singular_values(const DenseTensor& t);

inline constexpr double kDefaultRankTol = 1e-8;

/// Number of flattening singular values with sigma_i / sigma_1 > rel_tol (0 for
/// the zero tensor).
Index estimate_rank(const DenseTensor& t, double rel_tol = kDefaultRankTol);

/// Three-block partition for order-3 reshaping.  groups[0..2] are I1, I2, I3
/// with products p[0] >= p[1] >= p[2].
struct ReshapePlan {
  std::array<std::vector<Index>, 3> groups;
  std::array<Index, 3> p{};
  Index delta = 0;
  Index max_unique_rank = 0;
};

/// Builds a plan from three mode groups (any order); products are sorted and
/// the uniqueness bound p1 + min(floor(delta/2), delta) is filled in.
ReshapePlan make_reshape_plan(std::span<const Index> dims, std::array<std::vector<Index>, 3> groups);

/// Among all three-block partitions with r <= max_unique_rank and r <= p2,
/// returns one with the largest max_unique_rank.  Ties keep the first
/// partition in restricted-growth-string order.
ReshapePlan choose_reshape_plan(std::span<const Index> dims, Index r);

/// Order-3 tensor of dims (p1, p2, p3); each grouped index is the row-major
/// linearization of its modes in ascending mode order.
DenseTensor reshape3(const DenseTensor& t, const ReshapePlan& plan);

/// Inverse of reshape3.
DenseTensor unreshape3(const DenseTensor& t3, std::span<const Index> dims, const ReshapePlan& plan);

/// Multiplies every mode-`mode` fiber by v.
DenseTensor mode_product(const Matrix& v, Index mode, const DenseTensor& t);

}  // namespace gpcpd
