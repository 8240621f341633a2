#include "gpcpd/approximate.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gpcpd/error.hpp"
#include "gpcpd/linalg.hpp"
#include "gpcpd/unfold.hpp"

namespace gpcpd {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double objective(const DenseTensor& t, const std::vector<Matrix>& f) {
  const double r = hs_norm(t - expand(CPDecomposition(f)));
  return r * r;
}

std::vector<Matrix> axpy(const std::vector<Matrix>& base, const std::vector<Matrix>& dir, double alpha) {
  std::vector<Matrix> out(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) out[j] = base[j] + alpha * dir[j];
  return out;
}

// Exact line search along old + alpha (new - old), alpha real.  The residual
// is a degree-m polynomial in alpha, recovered from m + 1 evaluations; its
// squared norm has degree 2m and is minimized over the real critical points.
// Returns the alpha with the smallest model value (1 when nothing is better).
double line_search_alpha(const DenseTensor& t, const std::vector<Matrix>& old_f,
                         const std::vector<Matrix>& dir) {
  const Index m = static_cast<Index>(old_f.size());
  const Index npts = m + 1;
  Eigen::MatrixXd vander(npts, npts);
  std::vector<Vector> vals;
  for (Index i = 0; i < npts; ++i) {
    const double node = static_cast<double>(i);
    for (Index k = 0; k < npts; ++k) vander(i, k) = std::pow(node, static_cast<double>(k));
    const DenseTensor res = t - expand(CPDecomposition(axpy(old_f, dir, node)));
    vals.emplace_back(Eigen::Map<const Vector>(res.data().data(), res.size()));
  }
  Matrix vm(npts, vals[0].size());
  for (Index i = 0; i < npts; ++i) vm.row(i) = vals[static_cast<std::size_t>(i)].transpose();
  const Matrix coeffs = vander.cast<Complex>().partialPivLu().solve(vm);  // row k: alpha^k coefficient
  const Eigen::MatrixXd gram = (coeffs.conjugate() * coeffs.transpose()).real();
  Eigen::VectorXd poly = Eigen::VectorXd::Zero(2 * m + 1);
  for (Index a = 0; a < npts; ++a) {
    for (Index b = 0; b < npts; ++b) poly(a + b) += gram(a, b);
  }
  auto eval = [&](double x) {
    double v = 0.0;
    for (Index k = poly.size(); k-- > 0;) v = v * x + poly(k);
    return v;
  };
  // Critical points: eigenvalues of the companion matrix of p'.
  const Index deg = 2 * m - 1;
  Eigen::VectorXd dp(deg + 1);
  for (Index k = 0; k <= deg; ++k) dp(k) = static_cast<double>(k + 1) * poly(k + 1);
  double best_alpha = 1.0;
  double best = eval(1.0);
  if (dp(deg) == 0.0) return best_alpha;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (Index k = 0; k < deg; ++k) comp(0, k) = -dp(deg - 1 - k) / dp(deg);
  for (Index k = 1; k < deg; ++k) comp(k, k - 1) = 1.0;
  const Eigen::VectorXcd roots = comp.eigenvalues();
  for (Index i = 0; i < roots.size(); ++i) {
    const Complex z = roots(i);
    if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z))) continue;
    const double v = eval(z.real());
    if (v < best) {
      best = v;
      best_alpha = z.real();
    }
  }
  return best_alpha;
}

}  // namespace

AlsResult refine_als(const DenseTensor& t, const CPDecomposition& init, const ApproxOptions& opts) {
  if (init.dims() != t.dims()) throw Error(ErrorCode::DimensionMismatch, "initial factors do not match tensor dims");
  if (opts.max_als_iters < 1 || !(opts.als_rel_tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "max_als_iters must be positive and als_rel_tol nonnegative");
  }
  const Index m = t.order();
  const Index r = init.rank();
  std::vector<Matrix> unfoldings;
  for (Index j = 0; j < m; ++j) unfoldings.push_back(unfold(t, j).transpose());
  const double fnorm = hs_norm(t);
  const double floor_obj = 1e-24 * fnorm * fnorm;

  AlsResult out{init, 0, false, 0, 0, {}};
  std::vector<Matrix> cur = init.factors();
  double f = objective(t, cur);
  out.objective.push_back(f);

  auto sweep = [&](std::vector<Matrix> u) {
    for (Index j = 0; j < m; ++j) {
      std::vector<Matrix> others;
      for (Index i = 0; i < m; ++i) {
        if (i != j) others.push_back(u[static_cast<std::size_t>(i)]);
      }
      const Matrix k = khatri_rao(others);
      const Matrix& rhs = unfoldings[static_cast<std::size_t>(j)];
      const linalg::LeastSquares ls(k);
      Matrix x;
      if (ls.rank(kFullRankTol) < r) {
        const double kn = k.norm();
        x = linalg::ridge_solve(k, rhs, 1e-12 * kn * kn);
        ++out.ridge_solves;
      } else {
        x = ls.solve(rhs);
      }
      u[static_cast<std::size_t>(j)] = x.transpose();
    }
    return u;
  };

  for (int it = 1; it <= opts.max_als_iters; ++it) {
    out.iterations = it;
    std::vector<Matrix> next = sweep(cur);
    double fn = objective(t, next);
    if (opts.line_search && r > 0) {
      std::vector<Matrix> dir(next.size());
      for (std::size_t j = 0; j < next.size(); ++j) dir[j] = next[j] - cur[j];
      const double alpha = line_search_alpha(t, cur, dir);
      if (alpha != 1.0) {
        std::vector<Matrix> trial = axpy(cur, dir, alpha);
        const double ft = objective(t, trial);
        if (ft < fn) {
          next = std::move(trial);
          fn = ft;
          ++out.line_search_steps;
        }
      }
    }
    if (fn > f) {
      // Rounding-level increase: keep the previous iterate and stop.
      out.objective.push_back(f);
      out.converged = true;
      break;
    }
    cur = std::move(next);
    out.objective.push_back(fn);
    const bool small_step = f - fn < opts.als_rel_tol * f;
    f = fn;
    if (small_step || f <= floor_obj) {
      out.converged = true;
      break;
    }
  }
  out.cp = CPDecomposition(std::move(cur));
  return out;
}

ApproxResult approximate(const DenseTensor& t, Index r, const ApproxOptions& opts) {
  const auto start = Clock::now();
  GenPolyRun run = run_generating_polynomial(t, r, opts.seed, opts.xi_redraws);
  ApproxResult out{run.cp, std::nullopt, 0.0, std::nullopt, 0, 0, {}, {}, run.modes.max_offdiag_ratio, 0.0};
  out.resid_gp = hs_norm(t - expand(out.x_gp));
  out.timings.gp_ms = elapsed_ms(start);
  if (opts.refine) {
    const auto t0 = Clock::now();
    AlsResult als = refine_als(t, out.x_gp, opts);
    out.x_opt = normalize_columns(als.cp);
    out.resid_opt = hs_norm(t - expand(*out.x_opt));
    out.als_iters = als.iterations;
    out.ridge_solves = als.ridge_solves;
    out.als_objective = std::move(als.objective);
    out.timings.opt_ms = elapsed_ms(t0);
  }
  return out;
}

CPDecomposition rank1_approx(const DenseTensor& t) {
  if (t.order() == 1) {
    Matrix u(t.dim(0), 1);
    for (Index i = 0; i < t.size(); ++i) u(i, 0) = t[i];
    return CPDecomposition({u});
  }
  if (t.order() == 2) {
    const auto tr = linalg::dominant_triple(t.leading_unfolding());
    Matrix a = tr.sigma * tr.u;
    Matrix b = tr.v.conjugate();
    return normalize_columns(CPDecomposition({a, b}));
  }
  ApproxOptions opts;
  opts.max_als_iters = 5000;
  opts.als_rel_tol = 1e-14;
  const CPDecomposition init = decompose(t, 1, opts.seed);
  return normalize_columns(refine_als(t, init, opts).cp);
}

ApproxResult approximate_reshaped(const DenseTensor& t, Index r, const ApproxOptions& opts) {
  const auto start = Clock::now();
  const ReshapePlan plan = choose_reshape_plan(t.dims(), r);
  const DenseTensor t3 = reshape3(t, plan);
  GenPolyRun run = run_generating_polynomial(t3, r, opts.seed, opts.xi_redraws);
  std::vector<std::array<std::vector<Vector>, 3>> parts(static_cast<std::size_t>(r));
  double worst = 0.0;
  for (Index s = 0; s < r; ++s) {
    for (std::size_t g = 0; g < 3; ++g) {
      Dims gd;
      for (Index a : plan.groups[g]) gd.push_back(t.dim(a));
      const Vector w = run.cp.factor(static_cast<Index>(g)).col(s);
      std::vector<Vector> vecs;
      if (gd.size() <= 2) {
        vecs = kronecker_split(w, gd).vectors;
      } else {
        const DenseTensor wt(gd, std::vector<Complex>(w.data(), w.data() + w.size()));
        const CPDecomposition r1 = rank1_approx(wt);
        for (Index a = 0; a < r1.order(); ++a) vecs.emplace_back(r1.factor(a).col(0));
      }
      Vector k = vecs[0];
      for (std::size_t i = 1; i < vecs.size(); ++i) {
        Vector next(k.size() * vecs[i].size());
        for (Index q = 0; q < k.size(); ++q) next.segment(q * vecs[i].size(), vecs[i].size()) = k(q) * vecs[i];
        k = std::move(next);
      }
      const double wn = w.norm();
      if (wn > 0.0) worst = std::max(worst, (w - k).norm() / wn);
      parts[static_cast<std::size_t>(s)][g] = std::move(vecs);
    }
  }
  ApproxResult out{assemble_from_groups(t.dims(), plan, parts), std::nullopt, 0.0, std::nullopt, 0, 0, {}, {},
                   run.modes.max_offdiag_ratio, worst};
  out.resid_gp = hs_norm(t - expand(out.x_gp));
  out.timings.gp_ms = elapsed_ms(start);
  if (opts.refine) {
    const auto t0 = Clock::now();
    AlsResult als = refine_als(t, out.x_gp, opts);
    out.x_opt = normalize_columns(als.cp);
    out.resid_opt = hs_norm(t - expand(*out.x_opt));
    out.als_iters = als.iterations;
    out.ridge_solves = als.ridge_solves;
    out.als_objective = std::move(als.objective);
    out.timings.opt_ms = elapsed_ms(t0);
  }
  return out;
}

}  // namespace gpcpd
