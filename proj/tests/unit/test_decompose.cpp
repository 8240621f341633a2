#include <gtest/gtest.h>

#include "gpcpd/decompose.hpp"
#include "gpcpd/error.hpp"
#include "gpcpd/linalg.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

using namespace gpcpd;

namespace {

double rel_resid(const DenseTensor& f, const CPDecomposition& cp) { return hs_norm(f - expand(cp)) / hs_norm(f); }

GenPolySystem solved(const DenseTensor& f, Index r) { return solve_blocks(build_system(f, r)); }

}  // namespace

TEST(DrawXi, DeterministicUnitModulusPositiveReal) {
  const XiWeights a = draw_xi(50, 9), b = draw_xi(50, 9), c = draw_xi(50, 10);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (Complex x : a) {
    EXPECT_NEAR(std::abs(x), 1.0, 1e-15);
    EXPECT_GT(x.real(), 0.0);
  }
}

TEST(Combine, SingleBlockIsThatBlock) {
  const Vector a = Vector::LinSpaced(3, 1.0, 3.0), b = Vector::Ones(3), c = Vector::LinSpaced(2, 1.0, 2.0);
  CPDecomposition cp({Matrix(a), Matrix(b), Matrix(c)});
  const GenPolySystem sys = solved(expand(cp), 1);
  const EigenCombination eig = combine_and_diagonalize(sys, draw_xi(1, 3));
  EXPECT_LE((eig.combined - sys.blocks[0].y).norm(), 1e-14);
  EXPECT_NEAR(std::abs(eig.p(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(eig.eigenvalues(0) - 2.0), 0.0, 1e-14);
}

TEST(Combine, ReferenceExactSystemSeparates) {
  const GenPolySystem sys = solved(refdata::rank4_4x4x3(), 4);
  const EigenCombination eig = combine_and_diagonalize(sys, draw_xi(static_cast<Index>(sys.blocks.size()), 1));
  EXPECT_EQ(eig.eigenvalues.size(), 4);
  EXPECT_GT(eig.min_eig_gap, 1e-6);
  EXPECT_TRUE(std::isfinite(eig.condition));
  for (Index i = 0; i + 1 < 4; ++i) EXPECT_GE(eig.eigenvalues(i).real(), eig.eigenvalues(i + 1).real());
  EXPECT_LE((eig.combined * eig.p - eig.p * eig.eigenvalues.asDiagonal()).norm(), 1e-8 * eig.combined.norm());
}

TEST(Combine, DiagonalBlockGivesPermutation) {
  GenPolySystem sys;
  sys.dims = {3, 3, 2};
  sys.rank = 3;
  sys.solved = true;
  GenPolyBlock blk;
  blk.mode = 2;
  blk.level = 1;
  blk.y = Vector(Eigen::Vector3cd(2.0, 5.0, -1.0)).asDiagonal();
  sys.blocks.push_back(blk);
  const EigenCombination eig = combine_and_diagonalize(sys, {Complex(1.0)});
  EXPECT_LE((eig.p.cwiseAbs() - Matrix::Identity(3, 3).cwiseAbs()).norm(), 2.0);
  Matrix mag = eig.p.cwiseAbs().cast<Complex>();
  for (Index c = 0; c < 3; ++c) EXPECT_NEAR(mag.col(c).cwiseAbs().maxCoeff(), 1.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues(0).real(), 5.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues(2).real(), -1.0, 1e-14);
}

TEST(Combine, RepeatedEigenvalueIsDegenerate) {
  GenPolySystem sys;
  sys.dims = {2, 2, 2};
  sys.rank = 2;
  sys.solved = true;
  GenPolyBlock blk;
  blk.mode = 2;
  blk.level = 1;
  blk.y = Matrix::Identity(2, 2);
  sys.blocks.push_back(blk);
  try {
    combine_and_diagonalize(sys, {Complex(1.0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSpectrum);
  }
}

TEST(Combine, GenericDrawsAlwaysSeparate) {
  const GenPolySystem sys = solved(expand(oracle::random_cp({7, 6, 5}, 5, 42)), 5);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const EigenCombination eig = combine_and_diagonalize(sys, draw_xi(static_cast<Index>(sys.blocks.size()), s));
    EXPECT_GT(eig.min_eig_gap, 0.0);
  }
}

TEST(ExtractModes, RecoverTrueModeVectors) {
  CPDecomposition truth = normalize_columns(oracle::random_cp({6, 5, 4, 3}, 4, 3));
  const GenPolySystem sys = solved(expand(truth), 4);
  const EigenCombination eig = combine_and_diagonalize(sys, draw_xi(static_cast<Index>(sys.blocks.size()), 0));
  const ModeEstimates v = extract_modes(sys, eig);
  EXPECT_LE(v.max_offdiag_ratio, 1e-8);
  // Match columns through mode 2 (0-based), then compare every mode >= 2.
  for (Index s = 0; s < 4; ++s) {
    Index best = 0;
    double bd = 1e300;
    for (Index t = 0; t < 4; ++t) {
      const double d = (v.modes[2].col(s) - truth.factor(2).col(t)).norm();
      if (d < bd) {
        bd = d;
        best = t;
      }
    }
    EXPECT_LE(bd, 1e-8);
    EXPECT_LE((v.modes[3].col(s) - truth.factor(3).col(best)).norm(), 1e-8);
  }
}

TEST(ExtractModes, RankOneScalars) {
  Vector c(3);
  c << 1, -2, Complex(0, 1);
  CPDecomposition cp({Matrix(Vector::Ones(2)), Matrix(Vector::Ones(2)), Matrix(c)});
  const GenPolySystem sys = solved(expand(cp), 1);
  const ModeEstimates v = extract_modes(sys, combine_and_diagonalize(sys, draw_xi(2, 0)));
  EXPECT_LE((v.modes[2].col(0) - c).norm(), 1e-14);
}

TEST(SolveModes, ExactSubTensorEquations) {
  const CPDecomposition cp = oracle::random_cp({7, 5, 4}, 3, 8);
  const DenseTensor f = expand(cp);
  const GenPolySystem sys = solved(f, 3);
  const EigenCombination eig = combine_and_diagonalize(sys, draw_xi(static_cast<Index>(sys.blocks.size()), 0));
  const ModeEstimates v = extract_modes(sys, eig);
  const Matrix y = solve_mode2(f, eig, v);
  const DenseTensor head = leading_rows(f, 0, 3);
  const CPDecomposition head_cp({eig.p, y, v.modes[2]});
  EXPECT_LE(hs_norm(head - expand(head_cp)), 1e-10 * hs_norm(head));
  const Matrix z = solve_mode1_tail(f, y, v);
  EXPECT_EQ(z.rows(), 4);
  Matrix u1(7, 3);
  u1 << eig.p, z;
  EXPECT_LE(rel_resid(f, CPDecomposition({u1, y, v.modes[2]})), 1e-10);
}

TEST(SolveModes, EmptyTailWhenRankEqualsN1) {
  const DenseTensor f = expand(oracle::random_cp({3, 3, 3}, 3, 9));
  const GenPolySystem sys = solved(f, 3);
  const EigenCombination eig = combine_and_diagonalize(sys, draw_xi(static_cast<Index>(sys.blocks.size()), 0));
  const ModeEstimates v = extract_modes(sys, eig);
  const Matrix y = solve_mode2(f, eig, v);
  EXPECT_EQ(solve_mode1_tail(f, y, v).rows(), 0);
}

TEST(Decompose, ReferenceRank4Factors) {
  const DenseTensor f = refdata::rank4_4x4x3();
  const CPDecomposition cp = decompose(f, 4, 7);
  EXPECT_LE(rel_resid(f, cp), 1e-8);
  EXPECT_TRUE(cp_equivalent(cp, refdata::rank4_4x4x3_factors(), 1e-6));
}

TEST(Decompose, RankOneAnyShape) {
  for (const Dims& d : std::vector<Dims>{{2, 2, 2}, {5, 1, 3}, {1, 4, 2, 3}, {3, 3, 3, 3, 3}}) {
    const CPDecomposition cp = oracle::random_cp(d, 1, 4);
    const DenseTensor f = expand(cp);
    EXPECT_LE(rel_resid(f, decompose(f, 1)), 1e-12);
  }
}

TEST(Decompose, RoundTripOverSeeds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dims d{static_cast<Index>(10 + seed % 11), static_cast<Index>(8 + seed % 8), static_cast<Index>(6 + seed % 5)};
    const Index r = 1 + static_cast<Index>(seed % 10);
    const CPDecomposition truth = oracle::random_cp(d, r, seed);
    const DenseTensor f = expand(truth);
    const CPDecomposition cp = decompose(f, r, seed);
    EXPECT_LE(rel_resid(f, cp), 1e-8) << "seed " << seed;
    EXPECT_TRUE(cp_equivalent(cp, truth, 1e-6)) << "seed " << seed;
  }
}

TEST(Decompose, UnsortedModesRestored) {
  const CPDecomposition truth = oracle::random_cp({4, 9, 3, 6}, 4, 77);
  const DenseTensor f = expand(truth);
  const GenPolyRun run = run_generating_polynomial(f, 4, 0);
  EXPECT_EQ(run.mode_order, (std::vector<Index>{1, 3, 0, 2}));
  EXPECT_EQ(run.cp.dims(), f.dims());
  EXPECT_TRUE(cp_equivalent(run.cp, truth, 1e-6));
}

TEST(Decompose, XiInvariance) {
  const CPDecomposition truth = oracle::random_cp({9, 7, 5}, 6, 13);
  const DenseTensor f = expand(truth);
  EXPECT_TRUE(cp_equivalent(decompose(f, 6, 1), decompose(f, 6, 2), 1e-6));
}

TEST(Decompose, CanonicalFirstEntries) {
  const CPDecomposition cp = decompose(expand(oracle::random_cp({6, 5, 4}, 3, 14)), 3, 0);
  for (Index j = 1; j < 3; ++j) {
    for (Index s = 0; s < 3; ++s) EXPECT_NEAR(std::abs(cp.factor(j)(0, s) - 1.0), 0.0, 1e-12);
  }
}

TEST(Decompose, RankAboveBoundRejected) {
  const DenseTensor f = expand(oracle::random_cp({6, 5, 4}, 3, 14));
  try {
    decompose(f, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankBound);
  }
}

TEST(KroneckerSplit, ExactOnRankOne) {
  const Vector a = oracle::random_matrix(3, 1, 1).col(0), b = oracle::random_matrix(4, 1, 2).col(0),
               c = oracle::random_matrix(2, 1, 3).col(0);
  const Vector w = oracle::kron({a, b, c});
  const std::vector<Index> d{3, 4, 2};
  const KroneckerSplit s = kronecker_split(w, d);
  EXPECT_LE(s.residual, 1e-13 * w.norm());
  EXPECT_LE((oracle::kron(s.vectors) - w).norm(), 1e-13 * w.norm());
  const Vector noise = oracle::random_matrix(24, 1, 4).col(0);
  EXPECT_GT(kronecker_split(noise, d).residual, 1e-3);
}

TEST(DecomposeReshaped, ReferenceOrderFourFactors) {
  const DenseTensor f = refdata::rank5_5x4x3x3();
  const ReshapedRun run = decompose_reshaped_detailed(f, 5, 0);
  EXPECT_LE(rel_resid(f, run.cp), 1e-8);
  EXPECT_TRUE(cp_equivalent(run.cp, refdata::rank5_5x4x3x3_factors(), 1e-6));
  EXPECT_LE(run.max_split_ratio, 1e-8);
}

TEST(DecomposeReshaped, RankOneOrderFour) {
  const DenseTensor f = expand(oracle::random_cp({3, 4, 2, 5}, 1, 5));
  const ReshapedRun run = decompose_reshaped_detailed(f, 1, 0);
  EXPECT_LE(rel_resid(f, run.cp), 1e-12);
  EXPECT_LE(run.max_split_ratio, 1e-12);
}

TEST(DecomposeReshaped, RoundTripOverSeeds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dims d{5, 4, 4, 3};
    const Index r = 2 + static_cast<Index>(seed % 4);
    ASSERT_GE(choose_reshape_plan(d, r).max_unique_rank, r);
    const CPDecomposition truth = oracle::random_cp(d, r, seed + 900);
    const DenseTensor f = expand(truth);
    const CPDecomposition cp = decompose_reshaped(f, r, seed);
    EXPECT_LE(rel_resid(f, cp), 1e-8) << "seed " << seed;
  }
}

TEST(DecomposeReshaped, NonKroneckerFactorsFail) {
  // Order-3 CP whose grouped factors are generic vectors, viewed in order 4.
  const Dims d{3, 3, 4, 2};
  const ReshapePlan plan = choose_reshape_plan(d, 3);
  const CPDecomposition cp3 = oracle::random_cp({plan.p[0], plan.p[1], plan.p[2]}, 3, 6);
  const DenseTensor f = unreshape3(expand(cp3), d, plan);
  try {
    decompose_reshaped(f, 3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ReshapeFailure);
  }
}
