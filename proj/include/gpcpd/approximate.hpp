#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gpcpd/cp.hpp"
#include "gpcpd/decompose.hpp"
#include "gpcpd/tensor.hpp"

namespace gpcpd {

struct ApproxOptions {
  std::uint64_t seed = 0;
  bool refine = false;
  int max_als_iters = 500;
  double als_rel_tol = 1e-10;
  int xi_redraws = kDefaultXiRedraws;
  /// Exact line search along each sweep's update direction.  A step is kept
  /// only if it lowers the objective below the plain sweep result.
  bool line_search = true;
};

struct AlsResult {
  CPDecomposition cp;
  int iterations = 0;
  bool converged = false;
  int ridge_solves = 0;       // inner solves that needed regularization
  int line_search_steps = 0;  // sweeps where the extrapolated point was kept
  /// Squared residual before the first sweep and after each sweep.
  std::vector<double> objective;
};

/// Alternating least squares for min ||F - sum_s u^{s,1} (x) ... (x) u^{s,m}||^2.
/// Each sweep re-solves every factor against the Khatri-Rao product of the
/// others.  Stops when the relative decrease of the squared residual falls
/// below als_rel_tol, when the residual is at rounding level, or after
/// max_als_iters sweeps.
AlsResult refine_als(const DenseTensor& t, const CPDecomposition& init, const ApproxOptions& opts);

struct PhaseTimings {
  double gp_ms = 0.0;
  double opt_ms = 0.0;
};

struct ApproxResult {
  CPDecomposition x_gp;
  std::optional<CPDecomposition> x_opt;
  double resid_gp = 0.0;
  std::optional<double> resid_opt;
  int als_iters = 0;
  int ridge_solves = 0;
  std::vector<double> als_objective;
  PhaseTimings timings;
  double max_offdiag_ratio = 0.0;
  double max_split_ratio = 0.0;  // reshaped runs only
};

/// Generating-polynomial rank-r approximation X^gp, optionally refined by ALS
/// into X^opt.  r <= min(n_1, N_3) after sorting.
ApproxResult approximate(const DenseTensor& t, Index r, const ApproxOptions& opts = {});

/// Best rank-1 approximation: the tensor itself for order 1, the dominant
/// singular triple for order 2, X^gp with r = 1 refined by ALS otherwise.
CPDecomposition rank1_approx(const DenseTensor& t);

/// Approximation via an order-3 reshape.  Reshaped vectors over two modes are
/// split by their dominant singular triple, larger groups by rank1_approx.
/// Refinement (if requested) runs on the order-m factors.
ApproxResult approximate_reshaped(const DenseTensor& t, Index r, const ApproxOptions& opts = {});

}  // namespace gpcpd
