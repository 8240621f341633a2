#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gpcpd/cp.hpp"
#include "gpcpd/genpoly.hpp"
#include "gpcpd/unfold.hpp"

namespace gpcpd {

/// Random weights xi_{j,k}, one per block of a GenPolySystem.
using XiWeights = std::vector<Complex>;

/// Unit-modulus weights with phase uniform on (-pi/2, pi/2).  Every weight has
/// positive real part, so their sum never vanishes.
XiWeights draw_xi(Index count, std::uint64_t seed);

/// Eigendecomposition of Y[xi] = (sum xi)^-1 sum xi_{j,k} Y^{j,k}.
struct EigenCombination {
  XiWeights xi;
  Matrix combined;
  Matrix p;               // unit 2-norm eigenvector columns
  Vector eigenvalues;     // descending real part, then descending imaginary part
  double min_eig_gap = 0.0;
  double condition = 0.0;  // 2-norm condition number of p
};

/// Throws DegenerateSpectrum when the eigensolver fails, when two eigenvalues
/// are closer than 1e-10 ||Y[xi]||, or when the eigen residual check fails.
EigenCombination combine_and_diagonalize(const GenPolySystem& sys, const XiWeights& xi);

/// Mode vectors v^{s,j} = (1, lambda_{j,1,s}, ..., lambda_{j,n_j-1,s}) for
/// j >= 2, with lambda read off diag(P^-1 Y^{j,k} P).
struct ModeEstimates {
  std::vector<Matrix> modes;     // indexed by mode; empty for j < 2
  double max_offdiag_ratio = 0.0;  // max ||offdiag(P^-1 Y P)|| / ||Y||
};

ModeEstimates extract_modes(const GenPolySystem& sys, const EigenCombination& eig);

/// Least squares for F_{1:r,:,...} = sum_s p_s (x) y_s (x) v^{s,3} (x) ...;
/// returns the n_2 x r matrix [y_1 ... y_r].
Matrix solve_mode2(const DenseTensor& t, const EigenCombination& eig, const ModeEstimates& v);

/// Least squares for F_{r+1:n_1,:,...} = sum_s z_s (x) y_s (x) v^{s,3} (x) ...;
/// returns the (n_1 - r) x r matrix [z_1 ... z_r] (empty when n_1 == r).
Matrix solve_mode1_tail(const DenseTensor& t, const Matrix& y, const ModeEstimates& v);

inline constexpr int kDefaultXiRedraws = 5;

/// Everything computed along the way, in sorted mode order except `cp`.
struct GenPolyRun {
  CPDecomposition cp;                 // original mode order, normalized columns
  std::vector<Index> mode_order;      // sorted mode a is original mode mode_order[a]
  GenPolySystem system;
  EigenCombination eig;
  ModeEstimates modes;
  int xi_attempts = 1;
};

/// Generating-polynomial pipeline: least-squares blocks, xi combination (with
/// up to `redraws` redraws using seeds seed+1..seed+redraws), diagonal
/// extraction, mode-2 and mode-1 tail solves.  Works on an internally sorted
/// copy (n_1 >= n_2 >= ...) and restores the original mode order.
GenPolyRun run_generating_polynomial(const DenseTensor& t, Index r, std::uint64_t seed,
                                     int redraws = kDefaultXiRedraws);

/// Rank-r decomposition; r <= min(n_1, N_3) after sorting.
CPDecomposition decompose(const DenseTensor& t, Index r, std::uint64_t seed = 0);

/// Splits w, viewed as a row-major tensor of `dims`, into a_1 (x) ... (x) a_k
/// by successive dominant singular triples.  Exact when w is rank-1.
struct KroneckerSplit {
  std::vector<Vector> vectors;
  double residual = 0.0;
};
KroneckerSplit kronecker_split(const Vector& w, std::span<const Index> dims);

struct ReshapedRun {
  CPDecomposition cp;
  ReshapePlan plan;
  CPDecomposition reshaped;  // decomposition of the order-3 tensor
  double max_split_ratio = 0.0;  // max rank-1 split residual / ||w||
};

inline constexpr double kSplitTol = 1e-6;

/// Decomposition through an order-3 reshape; throws ReshapeFailure when some
/// reshaped factor is not Kronecker rank-1 within kSplitTol.
ReshapedRun decompose_reshaped_detailed(const DenseTensor& t, Index r, std::uint64_t seed = 0);
CPDecomposition decompose_reshaped(const DenseTensor& t, Index r, std::uint64_t seed = 0);

/// Reassembles order-m factors from per-group mode vectors, putting all scale
/// into mode 0, then normalizes columns.
CPDecomposition assemble_from_groups(const Dims& dims, const ReshapePlan& plan,
                                     const std::vector<std::array<std::vector<Vector>, 3>>& parts);

}  // namespace gpcpd
