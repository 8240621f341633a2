#include "gpcpd/unfold.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "gpcpd/error.hpp"
#include "gpcpd/linalg.hpp"

namespace gpcpd {

namespace {

std::vector<Index> inverse_perm(std::span<const Index> perm) {
  std::vector<Index> inv(perm.size());
  for (std::size_t a = 0; a < perm.size(); ++a) inv[static_cast<std::size_t>(perm[a])] = static_cast<Index>(a);
  return inv;
}

Index group_product(std::span<const Index> dims, const std::vector<Index>& group) {
  Index p = 1;
  for (Index g : group) p *= dims[static_cast<std::size_t>(g)];
  return p;
}

// Builds the tensor whose dims are `pdims` from a row-major matrix, then
// restores the original mode order given the permutation used to produce it.
DenseTensor fold_permuted(const Matrix& m, Dims pdims, std::span<const Index> perm) {
  std::vector<Complex> data(static_cast<std::size_t>(m.size()));
  const Index cols = m.cols();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index c = 0; c < cols; ++c) data[static_cast<std::size_t>(i * cols + c)] = m(i, c);
  }
  DenseTensor p(std::move(pdims), std::move(data));
  const auto inv = inverse_perm(perm);
  return permute_modes(p, inv);
}

}  // namespace

FlattenPlan most_square_plan(std::span<const Index> dims) {
  const Index m = static_cast<Index>(dims.size());
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "flattening needs a tensor of order at least 2");
  if (m > 30) throw Error(ErrorCode::TooLarge, "too many modes to enumerate flattenings");
  FlattenPlan best;
  bool have = false;
  Index best_gap = 0;
  const std::uint64_t rest = std::uint64_t{1} << (m - 1);
  for (std::uint64_t mask = 0; mask + 1 < rest; ++mask) {
    FlattenPlan p;
    p.group1.push_back(0);
    for (Index a = 1; a < m; ++a) {
      if (mask & (std::uint64_t{1} << (a - 1))) {
        p.group1.push_back(a);
      } else {
        p.group2.push_back(a);
      }
    }
    p.rows = group_product(dims, p.group1);
    p.cols = group_product(dims, p.group2);
    const Index gap = std::abs(p.rows - p.cols);
    if (!have || gap < best_gap || (gap == best_gap && p.group1 < best.group1)) {
      best = std::move(p);
      best_gap = gap;
      have = true;
    }
  }
  return best;
}

Matrix flatten(const DenseTensor& t, const FlattenPlan& plan) {
  std::vector<Index> perm = plan.group1;
  perm.insert(perm.end(), plan.group2.begin(), plan.group2.end());
  const DenseTensor p = permute_modes(t, perm);
  const Index rows = group_product(t.dims(), plan.group1);
  return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      p.data().data(), rows, p.size() / rows);
}

std::pair<FlattenPlan, Matrix> most_square_flatten(const DenseTensor& t) {
  FlattenPlan plan = most_square_plan(t.dims());
  Matrix m = flatten(t, plan);
  return {std::move(plan), std::move(m)};
}

Eigen::VectorXd flattening_singular_values(const DenseTensor& t) {
  if (t.order() == 1) {
    Eigen::VectorXd s(1);
    s(0) = hs_norm(t);
    return s;
  }
  return linalg::singular_values(most_square_flatten(t).second);
}

Index estimate_rank(const DenseTensor& t, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw Error(ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1)");
  const Eigen::VectorXd s = flattening_singular_values(t);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index n = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) / s(0) > rel_tol) ++n;
  }
  return n;
}

ReshapePlan make_reshape_plan(std::span<const Index> dims, std::array<std::vector<Index>, 3> groups) {
  const Index m = static_cast<Index>(dims.size());
  std::vector<int> seen(static_cast<std::size_t>(m), 0);
  for (auto& g : groups) {
    if (g.empty()) throw Error(ErrorCode::InvalidArgument, "reshape groups must be nonempty");
    std::sort(g.begin(), g.end());
    for (Index a : g) {
      if (a < 0 || a >= m) throw Error(ErrorCode::InvalidArgument, "reshape group mode out of range");
      ++seen[static_cast<std::size_t>(a)];
    }
  }
  for (Index a = 0; a < m; ++a) {
    if (seen[static_cast<std::size_t>(a)] != 1) {
      throw Error(ErrorCode::InvalidArgument, "reshape groups do not partition the modes")
          .with_mode(a);
    }
  }
  std::array<Index, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return group_product(dims, groups[static_cast<std::size_t>(a)]) >
           group_product(dims, groups[static_cast<std::size_t>(b)]);
  });
  ReshapePlan plan;
  for (std::size_t i = 0; i < 3; ++i) {
    plan.groups[i] = groups[static_cast<std::size_t>(order[i])];
    plan.p[i] = group_product(dims, plan.groups[i]);
  }
  plan.delta = plan.p[1] + plan.p[2] - plan.p[0] - 2;
  const Index half = plan.delta >= 0 ? plan.delta / 2 : -((-plan.delta + 1) / 2);
  plan.max_unique_rank = plan.p[0] + std::min(half, plan.delta);
  return plan;
}

ReshapePlan choose_reshape_plan(std::span<const Index> dims, Index r) {
  const Index m = static_cast<Index>(dims.size());
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "reshaping needs a tensor of order at least 3");
  if (m > 16) throw Error(ErrorCode::TooLarge, "too many modes to enumerate reshape partitions");
  // Restricted growth strings a with a[0] = 0 and max(a) = 2.
  std::vector<int> a(static_cast<std::size_t>(m), 0);
  bool have = false;
  ReshapePlan best;
  auto visit = [&]() {
    std::array<std::vector<Index>, 3> g;
    for (Index i = 0; i < m; ++i) g[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])].push_back(i);
    if (g[2].empty()) return;
    ReshapePlan p = make_reshape_plan(dims, std::move(g));
    if (p.max_unique_rank < r || r > p.p[1]) return;
    if (!have || p.max_unique_rank > best.max_unique_rank) {
      best = std::move(p);
      have = true;
    }
  };
  auto rec = [&](auto&& self, Index i, int mx) -> void {
    if (i == m) {
      visit();
      return;
    }
    for (int v = 0; v <= std::min(mx + 1, 2); ++v) {
      a[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, std::max(mx, v));
    }
  };
  rec(rec, 1, 0);
  if (!have) {
    throw Error(ErrorCode::RankBound,
                "rank " + std::to_string(r) + " too large for reshaping: no three-block partition has "
                "a large enough uniqueness bound");
  }
  return best;
}

DenseTensor reshape3(const DenseTensor& t, const ReshapePlan& plan) {
  make_reshape_plan(t.dims(), plan.groups);  // validates the partition
  std::vector<Index> perm;
  for (const auto& g : plan.groups) perm.insert(perm.end(), g.begin(), g.end());
  DenseTensor p = permute_modes(t, perm);
  Dims d3{group_product(t.dims(), plan.groups[0]), group_product(t.dims(), plan.groups[1]),
          group_product(t.dims(), plan.groups[2])};
  auto data = p.data();
  return DenseTensor(std::move(d3), std::vector<Complex>(data.begin(), data.end()));
}

DenseTensor unreshape3(const DenseTensor& t3, std::span<const Index> dims, const ReshapePlan& plan) {
  make_reshape_plan(dims, plan.groups);
  std::vector<Index> perm;
  Dims pdims;
  for (const auto& g : plan.groups) {
    for (Index a : g) {
      perm.push_back(a);
      pdims.push_back(dims[static_cast<std::size_t>(a)]);
    }
  }
  if (product(pdims) != t3.size()) throw Error(ErrorCode::DimensionMismatch, "unreshape3: size mismatch");
  auto data = t3.data();
  DenseTensor p(std::move(pdims), std::vector<Complex>(data.begin(), data.end()));
  return permute_modes(p, inverse_perm(perm));
}

DenseTensor mode_product(const Matrix& v, Index mode, const DenseTensor& t) {
  if (mode < 0 || mode >= t.order()) throw Error(ErrorCode::InvalidArgument, "mode_product: mode out of range");
  if (v.cols() != t.dim(mode)) {
    throw Error(ErrorCode::DimensionMismatch,
                "mode_product: matrix has " + std::to_string(v.cols()) + " columns, mode has size " +
                    std::to_string(t.dim(mode)))
        .with_mode(mode);
  }
  if (v.rows() < 1) throw Error(ErrorCode::InvalidArgument, "mode_product: matrix has no rows");
  std::vector<Index> perm{mode};
  Dims pdims{v.rows()};
  for (Index a = 0; a < t.order(); ++a) {
    if (a == mode) continue;
    perm.push_back(a);
    pdims.push_back(t.dim(a));
  }
  const Matrix m = v * unfold(t, mode);
  return fold_permuted(m, std::move(pdims), perm);
}

}  // namespace gpcpd
