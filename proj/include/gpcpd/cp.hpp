#pragma once

#include <span>
#include <vector>

#include "gpcpd/tensor.hpp"

namespace gpcpd {

/// Rank-r CP model sum_s u^{s,1} (x) ... (x) u^{s,m}.  Factor j is n_j x r and
/// holds the mode-j vectors as columns.
class CPDecomposition {
 public:
  explicit CPDecomposition(std::vector<Matrix> factors);

  /// All-zero factors of the given shape.
  static CPDecomposition zeros(const Dims& dims, Index rank);

  Index rank() const noexcept { return rank_; }
  Index order() const noexcept { return static_cast<Index>(factors_.size()); }
  Dims dims() const;
  const Matrix& factor(Index mode) const { return factors_.at(static_cast<std::size_t>(mode)); }
  const std::vector<Matrix>& factors() const noexcept { return factors_; }

 private:
  std::vector<Matrix> factors_;
  Index rank_ = 0;
};

DenseTensor expand(const CPDecomposition& cp);

/// Khatri-Rao (column-wise Kronecker) product.  Row index is row-major over
/// the inputs, so the first matrix varies slowest.
Matrix khatri_rao(std::span<const Matrix> mats);

/// Scales every mode-j vector (j >= 1) so that its first entry is 1, moving
/// the scale into mode 0.  When the first entry is below 1e-12 of the column
/// norm the largest-modulus entry is used as the pivot instead.
CPDecomposition normalize_columns(const CPDecomposition& cp);

/// Equality up to column permutation and per-column scaling.  After
/// normalization, columns must agree entrywise within tol times the column's
/// max-modulus entry, for every factor.
bool cp_equivalent(const CPDecomposition& a, const CPDecomposition& b, double tol);

/// Column permutation perm with a.col(s) ~ b.col(perm[s]) after normalization,
/// chosen greedily by smallest relative distance; also reports the largest
/// relative entrywise deviation of the matched pairs.
struct ColumnMatch {
  std::vector<Index> perm;
  double max_deviation = 0.0;
};
ColumnMatch match_columns(const CPDecomposition& a, const CPDecomposition& b);

inline constexpr Index kKruskalColumnLimit = 12;

/// Largest k such that every k columns are linearly independent.  Exact
/// subset enumeration; columns beyond kKruskalColumnLimit are refused.
Index kruskal_rank(const Matrix& a, double rel_tol = 1e-10);

}  // namespace gpcpd
