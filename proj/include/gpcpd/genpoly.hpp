#pragma once

#include <compare>
#include <map>
#include <vector>

#include "gpcpd/cp.hpp"
#include "gpcpd/tensor.hpp"

namespace gpcpd {

/// Monomial x_{1,i_1} ... x_{m,i_m}, identified with the tensor position
/// (i_1, ..., i_m).  Index 0 in a mode stands for the dehomogenized variable
/// x_{j,1} = 1, so a label supported on a mode subset J has 0 outside J.
struct MonomialLabel {
  std::vector<Index> indices;

  auto operator<=>(const MonomialLabel&) const = default;
};

using Polynomial = std::map<MonomialLabel, Complex>;

/// <p, F> = sum_mu c_mu F_mu.
Complex pairing(const Polynomial& p, const DenseTensor& t);

/// True iff |<p q, F>| <= tol ||F|| for every monomial q over the complement
/// of `modes`.  p must be supported on `modes`.
bool is_generating_poly(const Polynomial& p, std::span<const Index> modes, const DenseTensor& t,
                        double tol);

/// One (j, k) block of the generating-matrix equations, j >= 2, k >= 1
/// (0-based).  B column i holds F_{x_{1,i} x_{j,k} mu}; after solving, Y is
/// the r x r matrix with A_j Y^T ~ B.
struct GenPolyBlock {
  Index mode = 0;
  Index level = 0;
  Matrix rhs;
  Matrix y;
  double residual = 0.0;
};

/// Linear systems A[F,j] Y^T = b[F,j,k] over the label set
/// {(j,k): 2 <= j < m, 1 <= k < n_j}.  Rows of A_j and B are indexed by
/// monomials over the modes other than 0 and j (ascending, row-major).
struct GenPolySystem {
  Dims dims;
  Index rank = 0;
  std::vector<Matrix> coefficients;  // A_j, indexed by mode; empty for j < 2
  std::vector<GenPolyBlock> blocks;  // ordered by (mode, level)
  bool solved = false;

  Index rows(Index mode) const;  // N_j = (n_2 ... n_m) / n_j
};

/// Populates A_j and B_{j,k} by indexing; requires order >= 3,
/// 1 <= r <= n_1 and r <= N_j for every j >= 3.
GenPolySystem build_system(const DenseTensor& t, Index r);

inline constexpr double kFullRankTol = 1e-10;

/// Least-squares solve of every block.  Throws RankDeficient (with mode and
/// numerical rank) when some A_j has numerical rank below r.
GenPolySystem solve_blocks(GenPolySystem sys);

/// Checks Y_jk (u^{s,1})_{1:r} = ((u^{s,j})_k / (u^{s,j})_1) (u^{s,1})_{1:r}
/// within tol ||(u^{s,1})_{1:r}|| for all s and blocks.  `cp` must be in the
/// system's mode order.
bool eigen_relation_check(const GenPolySystem& sys, const CPDecomposition& cp, double tol);

}  // namespace gpcpd
