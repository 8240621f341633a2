#include "gpcpd/linalg.hpp"

#include <cmath>
#include <limits>

namespace gpcpd::linalg {

LeastSquares::LeastSquares(const Matrix& a) : qr_(a), cols_(a.cols()) {
  const Index k = std::min(a.rows(), a.cols());
  if (k == 0) {
    condition_ = 1.0;
    return;
  }
  const auto r = qr_.matrixQR();
  const double first = std::abs(r(0, 0));
  const double last = std::abs(r(k - 1, k - 1));
  if (first == 0.0) {
    condition_ = std::numeric_limits<double>::infinity();
  } else {
    condition_ = last == 0.0 ? std::numeric_limits<double>::infinity() : first / last;
  }
  if (a.rows() < a.cols() || condition_ > kSvdFallbackCondition) {
    svd_.emplace(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  }
}

Matrix LeastSquares::solve(const Matrix& b) const {
  if (cols_ == 0) return Matrix(0, b.cols());
  if (svd_) return svd_->solve(b);
  return qr_.solve(b);
}

Index LeastSquares::rank(double rel_tol) const {
  const Index k = std::min(qr_.rows(), qr_.cols());
  if (k == 0) return 0;
  const auto r = qr_.matrixQR();
  const double first = std::abs(r(0, 0));
  Index n = 0;
  for (Index i = 0; i < k; ++i) {
    if (std::abs(r(i, i)) > rel_tol * first) ++n;
  }
  return n;
}

Eigen::VectorXd singular_values(const Matrix& a) {
  if (a.size() == 0) return Eigen::VectorXd(0);
  return Eigen::BDCSVD<Matrix>(a).singularValues();
}

Index numerical_rank(const Matrix& a, double rel_tol) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index n = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++n;
  }
  return n;
}

Matrix ridge_solve(const Matrix& a, const Matrix& b, double lambda) {
  const Index n = a.cols();
  Matrix stacked(a.rows() + n, n);
  stacked.topRows(a.rows()) = a;
  stacked.bottomRows(n) = std::sqrt(lambda) * Matrix::Identity(n, n);
  Matrix rhs = Matrix::Zero(a.rows() + n, b.cols());
  rhs.topRows(a.rows()) = b;
  return Eigen::ColPivHouseholderQR<Matrix>(stacked).solve(rhs);
}

SingularTriple dominant_triple(const Matrix& a) {
  SingularTriple t;
  if (a.size() == 0) return t;
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  t.sigma = svd.singularValues()(0);
  t.u = svd.matrixU().col(0);
  t.v = svd.matrixV().col(0);
  return t;
}

double spectral_condition(const Matrix& a) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace gpcpd::linalg
