#include "gpcpd/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "gpcpd/error.hpp"
#include "gpcpd/linalg.hpp"
#include "gpcpd/random.hpp"

namespace gpcpd {

XiWeights draw_xi(Index count, std::uint64_t seed) {
  Rng rng(seed);
  XiWeights xi;
  xi.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    xi.push_back(std::polar(1.0, rng.uniform_open(-std::numbers::pi / 2, std::numbers::pi / 2)));
  }
  return xi;
}

EigenCombination combine_and_diagonalize(const GenPolySystem& sys, const XiWeights& xi) {
  if (!sys.solved) throw Error(ErrorCode::InvalidArgument, "system blocks are not solved");
  if (xi.size() != sys.blocks.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one xi weight is needed per block");
  }
  const Index r = sys.rank;
  EigenCombination out;
  out.xi = xi;
  if (sys.blocks.empty()) {
    if (r != 1) {
      throw Error(ErrorCode::DegenerateSpectrum, "no generating blocks to separate " + std::to_string(r) + " columns");
    }
    out.combined = Matrix::Identity(1, 1);
    out.p = Matrix::Identity(1, 1);
    out.eigenvalues = Vector::Ones(1);
    out.condition = 1.0;
    return out;
  }
  Complex total(0.0, 0.0);
  out.combined = Matrix::Zero(r, r);
  for (std::size_t b = 0; b < xi.size(); ++b) {
    out.combined += xi[b] * sys.blocks[b].y;
    total += xi[b];
  }
  out.combined /= total;

  Eigen::ComplexEigenSolver<Matrix> es(out.combined, true);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::DegenerateSpectrum, "eigensolver did not converge");
  std::vector<Index> order(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) order[static_cast<std::size_t>(i)] = i;
  const Vector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() > ev(b).real();
    return ev(a).imag() > ev(b).imag();
  });
  out.p.resize(r, r);
  out.eigenvalues.resize(r);
  for (Index i = 0; i < r; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.eigenvalues(i) = ev(src);
    out.p.col(i) = es.eigenvectors().col(src).normalized();
  }

  const double ynorm = out.combined.norm();
  double gap = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < r; ++a) {
    for (Index b = a + 1; b < r; ++b) gap = std::min(gap, std::abs(out.eigenvalues(a) - out.eigenvalues(b)));
  }
  out.min_eig_gap = r > 1 ? gap : 0.0;
  if (r > 1 && !(gap > 1e-10 * ynorm)) {
    throw Error(ErrorCode::DegenerateSpectrum, "eigenvalues of the combined block are not separated (gap " +
                                                   std::to_string(gap) + ")");
  }
  const double eig_resid = (out.combined * out.p - out.p * out.eigenvalues.asDiagonal()).norm();
  if (eig_resid > 1e-8 * ynorm) throw Error(ErrorCode::DegenerateSpectrum, "eigenvector residual check failed");
  out.condition = linalg::spectral_condition(out.p);
  if (!std::isfinite(out.condition)) throw Error(ErrorCode::DegenerateSpectrum, "eigenvector matrix is singular");
  return out;
}

ModeEstimates extract_modes(const GenPolySystem& sys, const EigenCombination& eig) {
  const Index m = static_cast<Index>(sys.dims.size());
  const Index r = sys.rank;
  ModeEstimates out;
  out.modes.resize(static_cast<std::size_t>(m));
  for (Index j = 2; j < m; ++j) out.modes[static_cast<std::size_t>(j)] = Matrix::Ones(sys.dims[static_cast<std::size_t>(j)], r);
  const Eigen::PartialPivLU<Matrix> lu(eig.p);
  for (const auto& blk : sys.blocks) {
    const Matrix d = lu.solve(blk.y * eig.p);
    Matrix& v = out.modes[static_cast<std::size_t>(blk.mode)];
    for (Index s = 0; s < r; ++s) v(blk.level, s) = d(s, s);
    const double ynorm = blk.y.norm();
    if (ynorm > 0.0) {
      Matrix off = d;
      off.diagonal().setZero();
      out.max_offdiag_ratio = std::max(out.max_offdiag_ratio, off.norm() / ynorm);
    }
  }
  return out;
}

namespace {

Matrix trailing_kr(const ModeEstimates& v, Index m) {
  std::vector<Matrix> tail(v.modes.begin() + 2, v.modes.begin() + m);
  return khatri_rao(tail);
}

Matrix checked_solve(const Matrix& c, const Matrix& rhs, const char* what) {
  const Index nr = linalg::numerical_rank(c, kFullRankTol);
  if (nr < c.cols()) {
    throw Error(ErrorCode::RankDeficient, std::string(what) + " coefficient matrix has numerical rank " +
                                              std::to_string(nr) + " < " + std::to_string(c.cols()))
        .with_numerical_rank(nr);
  }
  return linalg::LeastSquares(c).solve(rhs);
}

}  // namespace

Matrix solve_mode2(const DenseTensor& t, const EigenCombination& eig, const ModeEstimates& v) {
  const Index m = t.order();
  const Index r = eig.p.cols();
  const Index n2 = t.dim(1);
  const Matrix w = trailing_kr(v, m);
  const Index rest = w.rows();
  const std::array<Matrix, 2> pw{eig.p, w};
  const Matrix c = khatri_rao(pw);
  // rhs((i1, rest), i2) = F(i1, i2, rest) for i1 < r.
  Matrix rhs(r * rest, n2);
  for (Index i1 = 0; i1 < r; ++i1) {
    for (Index i2 = 0; i2 < n2; ++i2) {
      const Complex* base = t.data().data() + (i1 * n2 + i2) * rest;
      for (Index q = 0; q < rest; ++q) rhs(i1 * rest + q, i2) = base[q];
    }
  }
  return checked_solve(c, rhs, "mode-2").transpose();
}

Matrix solve_mode1_tail(const DenseTensor& t, const Matrix& y, const ModeEstimates& v) {
  const Index m = t.order();
  const Index r = y.cols();
  const Index n1 = t.dim(0);
  if (n1 <= r) return Matrix(0, r);
  const Matrix w = trailing_kr(v, m);
  const std::array<Matrix, 2> yw{y, w};
  const Matrix c = khatri_rao(yw);
  const Matrix rhs = t.leading_unfolding().bottomRows(n1 - r).transpose();
  return checked_solve(c, rhs, "mode-1").transpose();
}

GenPolyRun run_generating_polynomial(const DenseTensor& t, Index r, std::uint64_t seed, int redraws) {
  const Index m = t.order();
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "decomposition needs a tensor of order at least 3");
  const std::vector<Index> order = descending_order(t.dims());
  const DenseTensor ts = permute_modes(t, order);
  GenPolySystem sys = solve_blocks(build_system(ts, r));

  std::optional<EigenCombination> eig;
  int attempts = 0;
  std::string last;
  for (int a = 0; a <= redraws && !eig; ++a) {
    ++attempts;
    try {
      eig = combine_and_diagonalize(sys, draw_xi(static_cast<Index>(sys.blocks.size()), seed + static_cast<std::uint64_t>(a)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateSpectrum) throw;
      last = e.what();
    }
  }
  if (!eig) {
    throw Error(ErrorCode::DegenerateSpectrum,
                "degenerate spectrum after " + std::to_string(attempts) + " xi draws (" + last + ")");
  }
  ModeEstimates modes = extract_modes(sys, *eig);
  const Matrix y = solve_mode2(ts, *eig, modes);
  const Matrix z = solve_mode1_tail(ts, y, modes);

  std::vector<Matrix> sorted(static_cast<std::size_t>(m));
  sorted[0].resize(ts.dim(0), r);
  sorted[0].topRows(r) = eig->p;
  sorted[0].bottomRows(z.rows()) = z;
  sorted[1] = y;
  for (Index j = 2; j < m; ++j) sorted[static_cast<std::size_t>(j)] = modes.modes[static_cast<std::size_t>(j)];
  std::vector<Matrix> original(static_cast<std::size_t>(m));
  for (Index a = 0; a < m; ++a) original[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])] = sorted[static_cast<std::size_t>(a)];

  return GenPolyRun{normalize_columns(CPDecomposition(std::move(original))), order, std::move(sys),
                    std::move(*eig), std::move(modes), attempts};
}

CPDecomposition decompose(const DenseTensor& t, Index r, std::uint64_t seed) {
  return run_generating_polynomial(t, r, seed).cp;
}

KroneckerSplit kronecker_split(const Vector& w, std::span<const Index> dims) {
  if (product(dims) != w.size()) throw Error(ErrorCode::DimensionMismatch, "kronecker_split: size mismatch");
  KroneckerSplit out;
  if (dims.empty()) return out;
  Vector rest = w;
  for (std::size_t g = 0; g + 1 < dims.size(); ++g) {
    const Index rows = dims[g];
    const Index cols = rest.size() / rows;
    Matrix mat(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index c = 0; c < cols; ++c) mat(i, c) = rest(i * cols + c);
    }
    const auto tr = linalg::dominant_triple(mat);
    out.vectors.push_back(tr.sigma * tr.u);
    rest = tr.v.conjugate();
  }
  out.vectors.push_back(rest);
  Vector k = out.vectors[0];
  for (std::size_t g = 1; g < out.vectors.size(); ++g) {
    const Vector& b = out.vectors[g];
    Vector next(k.size() * b.size());
    for (Index i = 0; i < k.size(); ++i) next.segment(i * b.size(), b.size()) = k(i) * b;
    k = std::move(next);
  }
  out.residual = (w - k).norm();
  return out;
}

CPDecomposition assemble_from_groups(const Dims& dims, const ReshapePlan& plan,
                                     const std::vector<std::array<std::vector<Vector>, 3>>& parts) {
  const Index r = static_cast<Index>(parts.size());
  std::vector<Matrix> f;
  for (Index n : dims) f.push_back(Matrix::Zero(n, r));
  for (Index s = 0; s < r; ++s) {
    for (std::size_t g = 0; g < 3; ++g) {
      const auto& modes = plan.groups[g];
      const auto& vecs = parts[static_cast<std::size_t>(s)][g];
      if (vecs.size() != modes.size()) throw Error(ErrorCode::DimensionMismatch, "group vector count mismatch");
      for (std::size_t i = 0; i < modes.size(); ++i) f[static_cast<std::size_t>(modes[i])].col(s) = vecs[i];
    }
  }
  return normalize_columns(CPDecomposition(std::move(f)));
}

ReshapedRun decompose_reshaped_detailed(const DenseTensor& t, Index r, std::uint64_t seed) {
  ReshapePlan plan = choose_reshape_plan(t.dims(), r);
  const DenseTensor t3 = reshape3(t, plan);
  CPDecomposition cp3 = decompose(t3, r, seed);
  std::vector<std::array<std::vector<Vector>, 3>> parts(static_cast<std::size_t>(r));
  double worst = 0.0;
  for (Index s = 0; s < r; ++s) {
    for (std::size_t g = 0; g < 3; ++g) {
      Dims gd;
      for (Index a : plan.groups[g]) gd.push_back(t.dim(a));
      const Vector w = cp3.factor(static_cast<Index>(g)).col(s);
      KroneckerSplit split = kronecker_split(w, gd);
      const double wn = w.norm();
      const double ratio = wn > 0.0 ? split.residual / wn : 0.0;
      worst = std::max(worst, ratio);
      if (ratio > kSplitTol) {
        throw Error(ErrorCode::ReshapeFailure, "reshaped factor " + std::to_string(s + 1) + " of group " +
                                                   std::to_string(g + 1) +
                                                   " is not Kronecker rank-1 (relative residual " +
                                                   std::to_string(ratio) + ")");
      }
      parts[static_cast<std::size_t>(s)][g] = std::move(split.vectors);
    }
  }
  CPDecomposition cp = assemble_from_groups(t.dims(), plan, parts);
  return ReshapedRun{std::move(cp), std::move(plan), std::move(cp3), worst};
}

CPDecomposition decompose_reshaped(const DenseTensor& t, Index r, std::uint64_t seed) {
  return decompose_reshaped_detailed(t, r, seed).cp;
}

}  // namespace gpcpd
