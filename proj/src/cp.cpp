#include "gpcpd/cp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpcpd/error.hpp"
#include "gpcpd/linalg.hpp"

namespace gpcpd {

CPDecomposition::CPDecomposition(std::vector<Matrix> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorCode::InvalidArgument, "a CP decomposition needs at least one factor");
  rank_ = factors_[0].cols();
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    if (factors_[j].cols() != rank_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "factor " + std::to_string(j) + " has " + std::to_string(factors_[j].cols()) +
                      " columns, expected " + std::to_string(rank_))
          .with_mode(static_cast<std::int64_t>(j));
    }
    if (factors_[j].rows() < 1) {
      throw Error(ErrorCode::DimensionMismatch, "factor has no rows").with_mode(static_cast<std::int64_t>(j));
    }
  }
}

CPDecomposition CPDecomposition::zeros(const Dims& dims, Index rank) {
  std::vector<Matrix> f;
  f.reserve(dims.size());
  for (Index n : dims) f.push_back(Matrix::Zero(n, rank));
  return CPDecomposition(std::move(f));
}

Dims CPDecomposition::dims() const {
  Dims d;
  d.reserve(factors_.size());
  for (const auto& f : factors_) d.push_back(f.rows());
  return d;
}

Matrix khatri_rao(std::span<const Matrix> mats) {
  if (mats.empty()) return Matrix::Ones(1, 1);
  const Index r = mats[0].cols();
  Matrix k = mats[0];
  for (std::size_t j = 1; j < mats.size(); ++j) {
    const Matrix& b = mats[j];
    if (b.cols() != r) throw Error(ErrorCode::DimensionMismatch, "khatri_rao: column counts differ");
    Matrix next(k.rows() * b.rows(), r);
    for (Index s = 0; s < r; ++s) {
      for (Index i = 0; i < k.rows(); ++i) {
        next.col(s).segment(i * b.rows(), b.rows()) = k(i, s) * b.col(s);
      }
    }
    k = std::move(next);
  }
  return k;
}

DenseTensor expand(const CPDecomposition& cp) {
  const Dims dims = cp.dims();
  DenseTensor out(dims);
  if (cp.rank() == 0) return out;
  std::span<const Matrix> rest(cp.factors().data() + 1, cp.factors().size() - 1);
  const Matrix kr = khatri_rao(rest);
  const Matrix m = cp.factor(0) * kr.transpose();
  const Index cols = m.cols();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index c = 0; c < cols; ++c) out[i * cols + c] = m(i, c);
  }
  return out;
}

CPDecomposition normalize_columns(const CPDecomposition& cp) {
  std::vector<Matrix> f = cp.factors();
  for (Index s = 0; s < cp.rank(); ++s) {
    for (std::size_t j = 1; j < f.size(); ++j) {
      auto col = f[j].col(s);
      const double nrm = col.norm();
      if (nrm == 0.0) continue;
      Index piv = 0;
      if (std::abs(col(0)) < 1e-12 * nrm) col.cwiseAbs().maxCoeff(&piv);
      const Complex c = col(piv);
      col /= c;
      f[0].col(s) *= c;
    }
  }
  return CPDecomposition(std::move(f));
}

namespace {

// Largest entrywise deviation between column s of a and column t of b over
// all factors, relative to each column's max modulus.
double column_deviation(const CPDecomposition& a, const CPDecomposition& b, Index s, Index t) {
  double worst = 0.0;
  for (Index j = 0; j < a.order(); ++j) {
    const auto ca = a.factor(j).col(s);
    const auto cb = b.factor(j).col(t);
    const double scale = std::max(ca.cwiseAbs().maxCoeff(), cb.cwiseAbs().maxCoeff());
    const double diff = (ca - cb).cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

}  // namespace

ColumnMatch match_columns(const CPDecomposition& a, const CPDecomposition& b) {
  ColumnMatch m;
  const Index r = a.rank();
  if (a.dims() != b.dims() || b.rank() != r) {
    m.max_deviation = std::numeric_limits<double>::infinity();
    return m;
  }
  const CPDecomposition na = normalize_columns(a);
  const CPDecomposition nb = normalize_columns(b);
  struct Pair {
    double dev;
    Index s, t;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(r * r));
  for (Index s = 0; s < r; ++s) {
    for (Index t = 0; t < r; ++t) pairs.push_back({column_deviation(na, nb, s, t), s, t});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.dev < y.dev; });
  m.perm.assign(static_cast<std::size_t>(r), -1);
  std::vector<bool> used(static_cast<std::size_t>(r), false);
  for (const Pair& p : pairs) {
    auto& slot = m.perm[static_cast<std::size_t>(p.s)];
    if (slot >= 0 || used[static_cast<std::size_t>(p.t)]) continue;
    slot = p.t;
    used[static_cast<std::size_t>(p.t)] = true;
    m.max_deviation = std::max(m.max_deviation, p.dev);
  }
  return m;
}

bool cp_equivalent(const CPDecomposition& a, const CPDecomposition& b, double tol) {
  if (a.dims() != b.dims() || a.rank() != b.rank()) return false;
  return match_columns(a, b).max_deviation <= tol;
}

Index kruskal_rank(const Matrix& a, double rel_tol) {
  const Index n = a.cols();
  if (n > kKruskalColumnLimit) {
    throw Error(ErrorCode::TooLarge, "exact Kruskal rank is limited to " +
                                         std::to_string(kKruskalColumnLimit) + " columns, got " +
                                         std::to_string(n));
  }
  Matrix u = a;
  for (Index c = 0; c < n; ++c) {
    const double nrm = u.col(c).norm();
    if (nrm == 0.0) return 0;
    u.col(c) /= nrm;
  }
  for (Index k = 1; k <= n; ++k) {
    if (k > a.rows()) return k - 1;
    // Enumerate k-subsets via a bitmask permutation.
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
      Matrix sub(a.rows(), k);
      Index c = 0;
      for (Index i = 0; i < n; ++i) {
        if (pick[static_cast<std::size_t>(i)]) sub.col(c++) = u.col(i);
      }
      if (linalg::numerical_rank(sub, rel_tol) < k) return k - 1;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return n;
}

}  // namespace gpcpd
