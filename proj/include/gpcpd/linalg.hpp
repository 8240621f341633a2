#pragma once

#include <optional>

#include "gpcpd/tensor.hpp"

namespace gpcpd::linalg {

/// Dense least-squares solver for min ||A X - B||.
///
/// Column-pivoted Householder QR; when the R-diagonal condition estimate
/// exceeds kSvdFallbackCondition the solve switches to the SVD minimum-norm
/// solution.
class LeastSquares {
 public:
  static constexpr double kSvdFallbackCondition = 1e12;

  explicit LeastSquares(const Matrix& a);

  Matrix solve(const Matrix& b) const;

  /// Numerical rank with threshold rel_tol * (largest |R_ii|).
  Index rank(double rel_tol = 1e-10) const;
  double condition_estimate() const noexcept { return condition_; }
  bool used_svd() const noexcept { return svd_.has_value(); }
  Index cols() const noexcept { return cols_; }

 private:
  Eigen::ColPivHouseholderQR<Matrix> qr_;
  std::optional<Eigen::BDCSVD<Matrix>> svd_;
  double condition_ = 0.0;
  Index cols_ = 0;
};

Eigen::VectorXd singular_values(const Matrix& a);

/// Singular values above rel_tol * sigma_1.  Zero for an all-zero matrix.
Index numerical_rank(const Matrix& a, double rel_tol);

/// Ridge-regularized solve of min ||A X - B||^2 + lambda ||X||^2 via the
/// stacked system [A; sqrt(lambda) I].
Matrix ridge_solve(const Matrix& a, const Matrix& b, double lambda);

/// Dominant singular triple of a: a ~ sigma * u * v^H.
struct SingularTriple {
  double sigma = 0.0;
  Vector u;
  Vector v;
};
SingularTriple dominant_triple(const Matrix& a);

double spectral_condition(const Matrix& a);

}  // namespace gpcpd::linalg
