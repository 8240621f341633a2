#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

namespace oracle {

gpcpd::DenseTensor expand_loop(const gpcpd::CPDecomposition& cp) {
  const Dims dims = cp.dims();
  gpcpd::DenseTensor t(dims);
  std::vector<Index> idx(dims.size(), 0);
  for (Index lin = 0; lin < t.size(); ++lin) {
    Index rem = lin;
    for (std::size_t k = dims.size(); k-- > 0;) {
      idx[k] = rem % dims[k];
      rem /= dims[k];
    }
    Complex sum(0.0, 0.0);
    for (Index s = 0; s < cp.rank(); ++s) {
      Complex p(1.0, 0.0);
      for (std::size_t j = 0; j < dims.size(); ++j) p *= cp.factor(static_cast<Index>(j))(idx[j], s);
      sum += p;
    }
    t[lin] = sum;
  }
  return t;
}

Index min_flatten_gap(const Dims& dims) {
  const std::size_t m = dims.size();
  Index best = -1;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m); ++mask) {
    Index a = 1, b = 1;
    for (std::size_t k = 0; k < m; ++k) ((mask >> k) & 1 ? a : b) *= dims[k];
    const Index gap = std::abs(a - b);
    if (best < 0 || gap < best) best = gap;
  }
  return best;
}

Index best_reshape_bound(const Dims& dims, Index r) {
  const std::size_t m = dims.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < m; ++k) total *= 3;
  Index best = -1;
  for (std::size_t code = 0; code < total; ++code) {
    Index p[3] = {1, 1, 1};
    bool used[3] = {false, false, false};
    std::size_t c = code;
    for (std::size_t k = 0; k < m; ++k) {
      p[c % 3] *= dims[k];
      used[c % 3] = true;
      c /= 3;
    }
    if (!used[0] || !used[1] || !used[2]) continue;
    std::sort(p, p + 3, std::greater<>());
    const Index delta = p[1] + p[2] - p[0] - 2;
    const Index bound = p[0] + std::min(static_cast<Index>(std::floor(delta / 2.0)), delta);
    if (bound >= r && r <= p[1]) best = std::max(best, bound);
  }
  return best;
}

Index kruskal_rank_subsets(const Matrix& a, double rel_tol) {
  const Index n = a.cols();
  Index k_ok = 0;
  for (Index k = 1; k <= n; ++k) {
    bool all = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n) && all; ++mask) {
      if (__builtin_popcountll(mask) != k) continue;
      Matrix sub(a.rows(), k);
      Index c = 0;
      for (Index i = 0; i < n; ++i) {
        if ((mask >> i) & 1) sub.col(c++) = a.col(i).normalized();
      }
      Eigen::JacobiSVD<Matrix> svd(sub);
      const auto s = svd.singularValues();
      Index rank = 0;
      for (Index i = 0; i < s.size(); ++i) rank += s(i) > rel_tol * s(0) ? 1 : 0;
      if (rank < k) all = false;
    }
    if (!all) break;
    k_ok = k;
  }
  return k_ok;
}

gpcpd::DenseTensor mode_product_loop(const Matrix& v, Index mode, const gpcpd::DenseTensor& t) {
  Dims od = t.dims();
  od[static_cast<std::size_t>(mode)] = v.rows();
  gpcpd::DenseTensor out(od);
  std::vector<Index> oi(od.size()), ti(od.size());
  for (Index lin = 0; lin < out.size(); ++lin) {
    Index rem = lin;
    for (std::size_t k = od.size(); k-- > 0;) {
      oi[k] = rem % od[k];
      rem /= od[k];
    }
    Complex sum(0.0, 0.0);
    ti = oi;
    for (Index q = 0; q < t.dim(mode); ++q) {
      ti[static_cast<std::size_t>(mode)] = q;
      sum += v(oi[static_cast<std::size_t>(mode)], q) * t(ti);
    }
    out[lin] = sum;
  }
  return out;
}

Vector kron(const std::vector<Vector>& vs) {
  Vector k = Vector::Ones(1);
  for (const Vector& v : vs) {
    Vector next(k.size() * v.size());
    for (Index i = 0; i < k.size(); ++i) {
      for (Index j = 0; j < v.size(); ++j) next(i * v.size() + j) = k(i) * v(j);
    }
    k = next;
  }
  return k;
}

double hopm_residual(const gpcpd::DenseTensor& t, int max_iters, double tol) {
  const Index m = t.order();
  std::vector<Vector> u(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    Eigen::JacobiSVD<Matrix> svd(gpcpd::unfold(t, j), Eigen::ComputeThinU);
    u[static_cast<std::size_t>(j)] = svd.matrixU().col(0);
  }
  // Contract t with conj(u_i) over every mode except j.
  auto contract = [&](Index j) {
    Vector g = Vector::Zero(t.dim(j));
    std::vector<Index> idx(static_cast<std::size_t>(m), 0);
    for (Index lin = 0; lin < t.size(); ++lin) {
      Index rem = lin;
      for (Index k = m; k-- > 0;) {
        idx[static_cast<std::size_t>(k)] = rem % t.dim(k);
        rem /= t.dim(k);
      }
      Complex w = t[lin];
      for (Index i = 0; i < m; ++i) {
        if (i != j) w *= std::conj(u[static_cast<std::size_t>(i)](idx[static_cast<std::size_t>(i)]));
      }
      g(idx[static_cast<std::size_t>(j)]) += w;
    }
    return g;
  };
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    double next = 0.0;
    for (Index j = 0; j < m; ++j) {
      Vector g = contract(j);
      next = g.norm();
      u[static_cast<std::size_t>(j)] = g / next;
    }
    if (std::abs(next - lambda) <= tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  const double fn = gpcpd::hs_norm(t);
  return std::sqrt(std::max(0.0, fn * fn - lambda * lambda));
}

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> nd;
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = Complex(nd(eng), nd(eng));
  }
  return a;
}

gpcpd::CPDecomposition random_cp(const Dims& dims, Index r, std::uint64_t seed) {
  std::vector<Matrix> f;
  for (std::size_t j = 0; j < dims.size(); ++j) f.push_back(random_matrix(dims[j], r, seed * 101 + j));
  return gpcpd::CPDecomposition(std::move(f));
}

}  // namespace oracle
