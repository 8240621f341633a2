#pragma once

#include <cstdint>

#include "gpcpd/cp.hpp"
#include "gpcpd/tensor.hpp"

namespace gpcpd {

struct GevdWorkspace {
  Matrix f1;              // F(0:r, 0:r, 0)
  Matrix f2;              // F(0:r, 0:r, 1), or a random slice combination on retry
  Matrix pencil_eigvecs;  // generalized eigenvectors of (F1^T, F2^T), unit columns
  Vector alpha;
  Vector beta;
  DenseTensor fhat{Dims{1}};  // X^T applied along mode 0 of F(0:r, :, :)
  double pencil_condition = 0.0;
  double min_chordal_gap = 0.0;
  bool retried = false;
};

/// Rank-r decomposition of an order-3 tensor through the pencil of two slices.
/// Requires r <= n_1, r <= n_2 and n_3 >= 2.  If the first pencil has a
/// repeated or infinite eigenvalue, or ill-conditioned eigenvectors, one retry
/// uses a seeded random combination of all n_3 slices in place of F2; a second
/// failure throws SingularPencil.
CPDecomposition gevd_decompose(const DenseTensor& t, Index r, std::uint64_t seed = 0);

struct GevdRun {
  CPDecomposition cp;
  GevdWorkspace ws;
};
GevdRun gevd_decompose_detailed(const DenseTensor& t, Index r, std::uint64_t seed = 0);

}  // namespace gpcpd
