#include "gpcpd/genpoly.hpp"

#include <optional>
#include <string>

#include "gpcpd/error.hpp"
#include "gpcpd/linalg.hpp"

namespace gpcpd {

Complex pairing(const Polynomial& p, const DenseTensor& t) {
  Complex sum(0.0, 0.0);
  for (const auto& [label, c] : p) sum += c * t(label.indices);
  return sum;
}

bool is_generating_poly(const Polynomial& p, std::span<const Index> modes, const DenseTensor& t,
                        double tol) {
  const Index m = t.order();
  std::vector<bool> in_j(static_cast<std::size_t>(m), false);
  for (Index a : modes) {
    if (a < 0 || a >= m) throw Error(ErrorCode::InvalidArgument, "mode subset out of range");
    in_j[static_cast<std::size_t>(a)] = true;
  }
  std::vector<Index> comp;
  Dims comp_dims;
  for (Index a = 0; a < m; ++a) {
    if (!in_j[static_cast<std::size_t>(a)]) {
      comp.push_back(a);
      comp_dims.push_back(t.dim(a));
    }
  }
  for (const auto& [label, c] : p) {
    if (static_cast<Index>(label.indices.size()) != m) {
      throw Error(ErrorCode::DimensionMismatch, "monomial label length does not match tensor order");
    }
    for (Index a : comp) {
      if (label.indices[static_cast<std::size_t>(a)] != 0) {
        throw Error(ErrorCode::InvalidArgument, "polynomial support lies outside the mode subset").with_mode(a);
      }
    }
  }
  const double bound = tol * hs_norm(t);
  bool ok = true;
  std::vector<Index> idx(static_cast<std::size_t>(m));
  auto check = [&](std::span<const Index> q) {
    if (!ok) return;
    Complex sum(0.0, 0.0);
    for (const auto& [label, c] : p) {
      idx = label.indices;
      for (std::size_t i = 0; i < comp.size(); ++i) idx[static_cast<std::size_t>(comp[i])] = q[i];
      sum += c * t(idx);
    }
    if (std::abs(sum) > bound) ok = false;
  };
  if (comp.empty()) {
    check(std::span<const Index>{});
  } else {
    for_each_index(comp_dims, check);
  }
  return ok;
}

Index GenPolySystem::rows(Index mode) const {
  Index n = 1;
  for (std::size_t a = 1; a < dims.size(); ++a) n *= dims[a];
  return n / dims.at(static_cast<std::size_t>(mode));
}

GenPolySystem build_system(const DenseTensor& t, Index r) {
  const Index m = t.order();
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "generating-polynomial systems need order >= 3");
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "rank must be positive");
  if (r > t.dim(0)) {
    throw Error(ErrorCode::RankBound,
                "rank " + std::to_string(r) + " exceeds n_1 = " + std::to_string(t.dim(0)))
        .with_mode(0);
  }
  GenPolySystem sys;
  sys.dims = t.dims();
  sys.rank = r;
  sys.coefficients.resize(static_cast<std::size_t>(m));
  for (Index j = 2; j < m; ++j) {
    const Index nj = sys.rows(j);
    if (r > nj) {
      throw Error(ErrorCode::RankBound, "rank " + std::to_string(r) + " exceeds N_" + std::to_string(j + 1) +
                                            " = " + std::to_string(nj))
          .with_mode(j);
    }
    std::vector<Index> perm{j, 0};
    for (Index a = 1; a < m; ++a) {
      if (a != j) perm.push_back(a);
    }
    const DenseTensor p = permute_modes(t, perm);
    const Index n1 = t.dim(0);
    // Slice k of p is an n_1 x N_j row-major block.
    auto block = [&](Index k) {
      Matrix b(nj, r);
      const Complex* base = p.data().data() + k * n1 * nj;
      for (Index l = 0; l < r; ++l) {
        for (Index mu = 0; mu < nj; ++mu) b(mu, l) = base[l * nj + mu];
      }
      return b;
    };
    sys.coefficients[static_cast<std::size_t>(j)] = block(0);
    for (Index k = 1; k < t.dim(j); ++k) {
      GenPolyBlock blk;
      blk.mode = j;
      blk.level = k;
      blk.rhs = block(k);
      sys.blocks.push_back(std::move(blk));
    }
  }
  return sys;
}

GenPolySystem solve_blocks(GenPolySystem sys) {
  const Index m = static_cast<Index>(sys.dims.size());
  std::vector<std::optional<linalg::LeastSquares>> solvers(static_cast<std::size_t>(m));
  for (Index j = 2; j < m; ++j) {
    const Matrix& a = sys.coefficients[static_cast<std::size_t>(j)];
    const Index nr = linalg::numerical_rank(a, kFullRankTol);
    if (nr < sys.rank) {
      throw Error(ErrorCode::RankDeficient, "coefficient matrix for mode " + std::to_string(j + 1) +
                                                " has numerical rank " + std::to_string(nr) + " < r = " +
                                                std::to_string(sys.rank))
          .with_mode(j)
          .with_numerical_rank(nr);
    }
    solvers[static_cast<std::size_t>(j)].emplace(a);
  }
  for (auto& blk : sys.blocks) {
    const auto& ls = *solvers[static_cast<std::size_t>(blk.mode)];
    const Matrix x = ls.solve(blk.rhs);
    blk.y = x.transpose();
    blk.residual = (sys.coefficients[static_cast<std::size_t>(blk.mode)] * x - blk.rhs).norm();
  }
  sys.solved = true;
  return sys;
}

bool eigen_relation_check(const GenPolySystem& sys, const CPDecomposition& cp, double tol) {
  if (!sys.solved) throw Error(ErrorCode::InvalidArgument, "system blocks are not solved");
  if (cp.dims() != sys.dims || cp.rank() != sys.rank) return false;
  const Matrix u1 = cp.factor(0).topRows(sys.rank);
  for (const auto& blk : sys.blocks) {
    const Matrix& uj = cp.factor(blk.mode);
    for (Index s = 0; s < sys.rank; ++s) {
      const Complex lambda = uj(blk.level, s) / uj(0, s);
      const Vector u = u1.col(s);
      if ((blk.y * u - lambda * u).norm() > tol * u.norm()) return false;
    }
  }
  return true;
}

}  // namespace gpcpd
