#include "gpcpd/gevd.hpp"

#include <complex>
#include <limits>
#include <string>

#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "gpcpd/error.hpp"
#include "gpcpd/linalg.hpp"
#include "gpcpd/random.hpp"
#include "gpcpd/unfold.hpp"

namespace gpcpd {

namespace {

constexpr double kChordalTol = 1e-10;
constexpr double kEigvecCondLimit = 1e12;

Matrix slice(const DenseTensor& t, Index r, Index k) {
  Matrix s(r, r);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < r; ++j) s(i, j) = t[(i * t.dim(1) + j) * t.dim(2) + k];
  }
  return s;
}

// Fills pencil_eigvecs, alpha, beta and the diagnostics; returns an empty
// string on success and a reason otherwise.
std::string solve_pencil(GevdWorkspace& ws) {
  const Index r = ws.f1.rows();
  Matrix a = ws.f1.transpose();
  Matrix b = ws.f2.transpose();
  ws.alpha.resize(r);
  ws.beta.resize(r);
  Matrix vr(r, r);
  Complex dummy;
  const lapack_int n = static_cast<lapack_int>(r);
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, b.data(), n, ws.alpha.data(),
                                        ws.beta.data(), &dummy, 1, vr.data(), n);
  if (info != 0) return "zggev failed with info " + std::to_string(info);
  const double scale = ws.f1.norm() + ws.f2.norm();
  for (Index i = 0; i < r; ++i) {
    const double h = std::hypot(std::abs(ws.alpha(i)), std::abs(ws.beta(i)));
    if (!(h > 1e-12 * scale)) return "pencil is singular";
  }
  ws.min_chordal_gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < r; ++i) {
    for (Index j = i + 1; j < r; ++j) {
      const double num = std::abs(ws.alpha(i) * ws.beta(j) - ws.alpha(j) * ws.beta(i));
      const double den = std::hypot(std::abs(ws.alpha(i)), std::abs(ws.beta(i))) *
                         std::hypot(std::abs(ws.alpha(j)), std::abs(ws.beta(j)));
      ws.min_chordal_gap = std::min(ws.min_chordal_gap, num / den);
    }
  }
  if (r > 1 && !(ws.min_chordal_gap > kChordalTol)) return "pencil eigenvalues are not distinct";
  for (Index c = 0; c < r; ++c) {
    const double nrm = vr.col(c).norm();
    if (nrm == 0.0) return "zero generalized eigenvector";
    vr.col(c) /= nrm;
  }
  ws.pencil_eigvecs = vr;
  ws.pencil_condition = linalg::spectral_condition(vr);
  if (!(ws.pencil_condition <= kEigvecCondLimit)) return "generalized eigenvectors are ill-conditioned";
  return {};
}

}  // namespace

GevdRun gevd_decompose_detailed(const DenseTensor& t, Index r, std::uint64_t seed) {
  if (t.order() != 3) throw Error(ErrorCode::InvalidArgument, "GEVD needs an order-3 tensor");
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "rank must be positive");
  if (r > t.dim(0) || r > t.dim(1)) {
    throw Error(ErrorCode::RankBound, "GEVD needs r <= n_1 and r <= n_2");
  }
  const Index n2 = t.dim(1);
  const Index n3 = t.dim(2);
  if (n3 < 2 && r > 1) throw Error(ErrorCode::RankBound, "GEVD needs at least two frontal slices");

  GevdWorkspace ws;
  ws.f1 = slice(t, r, 0);
  ws.f2 = n3 >= 2 ? slice(t, r, 1) : ws.f1;
  std::string why = solve_pencil(ws);
  if (!why.empty()) {
    Rng rng(seed);
    ws.f2 = Matrix::Zero(r, r);
    for (Index k = 0; k < n3; ++k) ws.f2 += rng.complex_gaussian() * slice(t, r, k);
    ws.retried = true;
    const std::string again = solve_pencil(ws);
    if (!again.empty()) {
      throw Error(ErrorCode::SingularPencil,
                  why + "; retry with a random slice combination: " + again);
    }
  }

  const DenseTensor head = leading_rows(t, 0, r);
  ws.fhat = mode_product(ws.pencil_eigvecs.transpose(), 0, head);
  Matrix u2(n2, r), u3(n3, r);
  for (Index s = 0; s < r; ++s) {
    Matrix sl(n2, n3);
    for (Index i = 0; i < n2; ++i) {
      for (Index k = 0; k < n3; ++k) sl(i, k) = ws.fhat[(s * n2 + i) * n3 + k];
    }
    const auto tr = linalg::dominant_triple(sl);
    u2.col(s) = tr.u;
    u3.col(s) = tr.sigma * tr.v.conjugate();
  }
  const std::array<Matrix, 2> pair{u2, u3};
  const Matrix k = khatri_rao(pair);
  const Index nr = linalg::numerical_rank(k, 1e-10);
  if (nr < r) {
    throw Error(ErrorCode::SingularPencil, "recovered mode-2/3 factors are rank deficient").with_numerical_rank(nr);
  }
  const Matrix u1 = linalg::LeastSquares(k).solve(t.leading_unfolding().transpose()).transpose();
  CPDecomposition cp = normalize_columns(CPDecomposition({u1, u2, u3}));
  return GevdRun{std::move(cp), std::move(ws)};
}

CPDecomposition gevd_decompose(const DenseTensor& t, Index r, std::uint64_t seed) {
  return gevd_decompose_detailed(t, r, seed).cp;
}

}  // namespace gpcpd
