#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ahc/error.hpp"
#include "ahc/transform.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace ahc {
namespace {

const WaveletBasis& bank(int k) { return builtin_basis(static_cast<BasisId>(k)); }

Block random_block(std::mt19937_64& rng, double lo = -255.0, double hi = 255.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng), u(rng)};
}

oracle::Table2x2 table(const Block& b) { return {{{b.m11, b.m12}, {b.m21, b.m22}}}; }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  EXPECT_EQ(a.dims(), b.dims());
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a.data()[i] - b.data()[i]));
  return e;
}

TEST(BlockTransform, Set1Example) {
  const BlockCoeffs c = block_forward({100, 50, 30, 20}, bank(0));
  EXPECT_DOUBLE_EQ(c.a, 50);
  EXPECT_DOUBLE_EQ(c.v, 60);
  EXPECT_DOUBLE_EQ(c.h, 100);
  EXPECT_DOUBLE_EQ(c.d, 40);
  EXPECT_EQ(c.basis, BasisId::set1);
}

TEST(BlockTransform, Set2Example) {
  const BlockCoeffs c = block_forward({8, 0, 0, 0}, bank(1));
  EXPECT_DOUBLE_EQ(c.a, 2);
  EXPECT_DOUBLE_EQ(c.v, 8);
  EXPECT_DOUBLE_EQ(c.h, 8);
  EXPECT_DOUBLE_EQ(c.d, 0);
}

TEST(BlockTransform, ScaledDividesDetailsOnly) {
  const BlockCoeffs c = block_forward({100, 50, 30, 20}, bank(0), Scaling::scaled);
  EXPECT_DOUBLE_EQ(c.a, 50);
  EXPECT_DOUBLE_EQ(c.v, 15);
  EXPECT_DOUBLE_EQ(c.h, 25);
  EXPECT_DOUBLE_EQ(c.d, 10);
}

TEST(BlockTransform, ConstantsAreAnnihilated) {
  for (int k = 0; k < 4; ++k) {
    const BlockCoeffs c = block_forward({7.5, 7.5, 7.5, 7.5}, bank(k));
    EXPECT_DOUBLE_EQ(c.a, 7.5);
    EXPECT_EQ(c.detail_energy(), 0.0);
    const Block b = block_inverse(c, bank(k));
    EXPECT_DOUBLE_EQ(b.m11, 7.5);
    EXPECT_DOUBLE_EQ(b.m22, 7.5);
  }
}

TEST(BlockTransform, InverseExample) {
  const Block b = block_inverse({50, 60, 100, 40, BasisId::set1}, bank(0));
  EXPECT_DOUBLE_EQ(b.m11, 100);
  EXPECT_DOUBLE_EQ(b.m12, 50);
  EXPECT_DOUBLE_EQ(b.m21, 30);
  EXPECT_DOUBLE_EQ(b.m22, 20);
}

TEST(BlockTransform, MatchesDirectEvaluation) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Block b = random_block(rng);
    for (int k = 0; k < 4; ++k) {
      const BlockCoeffs c = block_forward(b, bank(k));
      const oracle::Coeffs o = oracle::haar_block(table(b), bank(k).tables());
      EXPECT_NEAR(c.a, o.a, 1e-9);
      EXPECT_NEAR(c.v, o.v, 1e-9);
      EXPECT_NEAR(c.h, o.h, 1e-9);
      EXPECT_NEAR(c.d, o.d, 1e-9);
    }
  }
}

TEST(BlockTransform, RoundTripAllBanksBothScalings) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Block b = random_block(rng);
    for (int k = 0; k < 4; ++k) {
      for (Scaling s : {Scaling::literal, Scaling::scaled}) {
        const Block r = block_inverse(block_forward(b, bank(k), s), bank(k), s);
        EXPECT_NEAR(r.m11, b.m11, 1e-9);
        EXPECT_NEAR(r.m12, b.m12, 1e-9);
        EXPECT_NEAR(r.m21, b.m21, 1e-9);
        EXPECT_NEAR(r.m22, b.m22, 1e-9);
      }
    }
  }
}

TEST(BlockTransform, Linearity) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Block b1 = random_block(rng);
    const Block b2 = random_block(rng);
    const double alpha = 1.75;
    const Block mix{alpha * b1.m11 + b2.m11, alpha * b1.m12 + b2.m12, alpha * b1.m21 + b2.m21,
                    alpha * b1.m22 + b2.m22};
    for (int k = 0; k < 4; ++k) {
      const BlockCoeffs c1 = block_forward(b1, bank(k));
      const BlockCoeffs c2 = block_forward(b2, bank(k));
      const BlockCoeffs c = block_forward(mix, bank(k));
      EXPECT_NEAR(c.a, alpha * c1.a + c2.a, 1e-9);
      EXPECT_NEAR(c.v, alpha * c1.v + c2.v, 1e-9);
      EXPECT_NEAR(c.h, alpha * c1.h + c2.h, 1e-9);
      EXPECT_NEAR(c.d, alpha * c1.d + c2.d, 1e-9);
    }
  }
}

TEST(AdaptiveBlock, TieGoesToSet1) {
  EXPECT_EQ(adaptive_block_forward({3, 3, 3, 3}).basis, BasisId::set1);
}

TEST(AdaptiveBlock, CornerImpulsePicksSet2) {
  const oracle::Table2x2 m = {{{8, 0}, {0, 0}}};
  const auto e = oracle::bank_energies(m);
  EXPECT_DOUBLE_EQ(e[0], 192);
  EXPECT_DOUBLE_EQ(e[1], 128);
  EXPECT_DOUBLE_EQ(e[2], 128);
  EXPECT_DOUBLE_EQ(e[3], 128);
  const BlockCoeffs c = adaptive_block_forward({8, 0, 0, 0});
  EXPECT_EQ(c.basis, BasisId::set2);
  EXPECT_DOUBLE_EQ(c.detail_energy(), 128);
}

TEST(AdaptiveBlock, AgreesWithBruteForce) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Block b = random_block(rng);
    const auto e = oracle::bank_energies(table(b));
    const BlockCoeffs c = adaptive_block_forward(b);
    EXPECT_EQ(static_cast<int>(c.basis), oracle::brute_force_argmin(e));
    EXPECT_NEAR(c.detail_energy(), *std::min_element(e.begin(), e.end()), 1e-6);
  }
}

TEST(AdaptiveBlock, ScalingDoesNotChangeSelection) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(0, 3);
  for (int i = 0; i < 2000; ++i) {
    // Small integer blocks produce plenty of exact ties.
    const Block b{double(u(rng)), double(u(rng)), double(u(rng)), double(u(rng))};
    EXPECT_EQ(adaptive_block_forward(b, Scaling::literal).basis, adaptive_block_forward(b, Scaling::scaled).basis);
  }
}

TEST(AdaptiveBlock, NormalizedObjectiveWeightsByNorm) {
  // Normalized, all four banks cost 192 here and the tie goes to set1.
  const BlockCoeffs c = adaptive_block_forward({8, 0, 0, 0}, Scaling::literal, SelectionObjective::normalized);
  std::array<double, 4> cost{};
  for (int k = 0; k < 4; ++k) {
    const oracle::Coeffs o = oracle::haar_block({{{8, 0}, {0, 0}}}, bank(k).tables());
    const auto r = validate_orthogonality(bank(k));
    cost[k] = o.v * o.v / r.norms[0] + o.h * o.h / r.norms[1] + o.d * o.d / r.norms[2];
  }
  EXPECT_EQ(static_cast<int>(c.basis), oracle::brute_force_argmin(cost));
  EXPECT_EQ(c.basis, BasisId::set1);
}

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

TEST(Subband, SingleBlockMatchesBlockOps) {
  const Matrix m = from_rows({{8, 0}, {0, 0}});
  for (BasisMode mode : {BasisMode::per_block, BasisMode::global}) {
    TransformOptions opt;
    opt.mode = mode;
    const SubbandSet s = subband_forward(m, opt);
    const BlockCoeffs c = adaptive_block_forward({8, 0, 0, 0});
    EXPECT_EQ(s.ids.at(0, 0), c.basis);
    EXPECT_DOUBLE_EQ(s.A(0, 0), c.a);
    EXPECT_DOUBLE_EQ(s.V(0, 0), c.v);
    EXPECT_DOUBLE_EQ(s.H(0, 0), c.h);
    EXPECT_DOUBLE_EQ(s.D(0, 0), c.d);
    EXPECT_DOUBLE_EQ(s.detail_energy, 128);
  }
}

TEST(Subband, ConstantMatrix) {
  const Matrix m(8, 8, 42.0);
  for (BasisMode mode : {BasisMode::per_block, BasisMode::global, BasisMode::fixed}) {
    TransformOptions opt;
    opt.mode = mode;
    opt.fixed_id = BasisId::set4;
    const SubbandSet s = subband_forward(m, opt);
    EXPECT_EQ(s.A.dims(), (Dims{4, 4}));
    for (double v : s.A.data()) EXPECT_DOUBLE_EQ(v, 42.0);
    for (const Matrix* x : {&s.V, &s.H, &s.D}) {
      for (double v : x->data()) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(Subband, IdMapShapes) {
  std::mt19937_64 rng(6);
  const Matrix m = test::random_matrix(rng, 6, 10);
  TransformOptions opt;
  EXPECT_EQ(subband_forward(m, opt).ids.ids.dims(), (Dims{3, 5}));
  opt.mode = BasisMode::global;
  EXPECT_EQ(subband_forward(m, opt).ids.ids.dims(), (Dims{1, 1}));
  opt.mode = BasisMode::fixed;
  opt.fixed_id = BasisId::set3;
  const SubbandSet s = subband_forward(m, opt);
  EXPECT_EQ(s.ids.ids.dims(), (Dims{1, 1}));
  EXPECT_EQ(s.ids.at(2, 4), BasisId::set3);
}

TEST(Subband, GlobalEnergyIsMinimumOfFixedRuns) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Matrix m = test::random_matrix(rng, 8, 12);
    std::array<double, 4> fixed_energy{};
    for (int k = 0; k < 4; ++k) {
      TransformOptions opt;
      opt.mode = BasisMode::fixed;
      opt.fixed_id = static_cast<BasisId>(k);
      fixed_energy[k] = subband_forward(m, opt).detail_energy;
    }
    TransformOptions opt;
    opt.mode = BasisMode::global;
    const SubbandSet s = subband_forward(m, opt);
    EXPECT_DOUBLE_EQ(s.detail_energy, *std::min_element(fixed_energy.begin(), fixed_energy.end()));
    EXPECT_EQ(static_cast<int>(s.ids.at(0, 0)), oracle::brute_force_argmin(fixed_energy));
  }
}

TEST(Subband, RejectsOddOrEmpty) {
  TransformOptions opt;
  EXPECT_THROW(subband_forward(Matrix(3, 4), opt), Error);
  EXPECT_THROW(subband_forward(Matrix(4, 5), opt), Error);
  EXPECT_THROW(subband_forward(Matrix(), opt), Error);
}

TEST(Subband, RoundTripAllModes) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const Matrix m = test::random_matrix(rng, 16, 16);
    for (BasisMode mode : {BasisMode::per_block, BasisMode::global, BasisMode::fixed}) {
      for (Scaling s : {Scaling::literal, Scaling::scaled}) {
        TransformOptions opt;
        opt.mode = mode;
        opt.fixed_id = static_cast<BasisId>(i % 4);
        opt.scaling = s;
        EXPECT_LE(max_abs_diff(subband_inverse(subband_forward(m, opt), s), m), 1e-9);
      }
    }
  }
}

TEST(Subband, ZeroDetailsGiveConstantMatrix) {
  SubbandSet s;
  s.A = Matrix(2, 3, 9.0);
  s.V = s.H = s.D = Matrix(2, 3, 0.0);
  s.ids.mode = BasisMode::per_block;
  s.ids.ids = Grid<std::uint8_t>(2, 3, 2);
  const Matrix m = subband_inverse(s);
  EXPECT_EQ(m.dims(), (Dims{4, 6}));
  for (double v : m.data()) EXPECT_DOUBLE_EQ(v, 9.0);
}

TEST(Subband, TamperedIdChangesReconstruction) {
  std::mt19937_64 rng(9);
  const Matrix m = test::random_matrix(rng, 8, 8);
  SubbandSet s = subband_forward(m, TransformOptions{});
  auto& id = s.ids.ids(1, 2);
  id = static_cast<std::uint8_t>((id + 1) % 4);
  const Matrix r = subband_inverse(s);
  EXPECT_GT(max_abs_diff(r, m), 1e-6);
  id = 7;
  try {
    (void)subband_inverse(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_basis_id);
  }
}

TEST(Subband, InconsistentSizesRejected) {
  SubbandSet s = subband_forward(Matrix(4, 4, 1.0), TransformOptions{});
  s.V = Matrix(1, 2);
  EXPECT_THROW(subband_inverse(s), Error);
}

TEST(Pyramid, PadEvenReplicatesEdges) {
  const Matrix m = from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  const Matrix p = pad_even(m);
  EXPECT_EQ(p, from_rows({{1, 2, 3, 3}, {4, 5, 6, 6}, {7, 8, 9, 9}, {7, 8, 9, 9}}));
  EXPECT_EQ(pad_even(p), p);
}

TEST(Pyramid, FiveBySevenTwoLevels) {
  EXPECT_EQ(subband_dims({5, 7}), (Dims{3, 4}));
  EXPECT_EQ(subband_dims({3, 4}), (Dims{2, 2}));
  const auto dims = pyramid_input_dims({5, 7}, 2);
  ASSERT_EQ(dims.size(), 2u);
  EXPECT_EQ(dims[0], (Dims{5, 7}));
  EXPECT_EQ(dims[1], (Dims{3, 4}));

  std::mt19937_64 rng(10);
  const Matrix m = test::random_matrix(rng, 5, 7);
  const SubbandPyramid p = pyramid_forward(m, 2, TransformOptions{});
  ASSERT_EQ(p.levels.size(), 2u);
  EXPECT_EQ(p.levels[0].V.dims(), (Dims{3, 4}));
  EXPECT_EQ(p.levels[1].V.dims(), (Dims{2, 2}));
  EXPECT_EQ(p.coarse_A.dims(), (Dims{2, 2}));
  const Matrix r = pyramid_inverse(p);
  EXPECT_EQ(r.dims(), (Dims{5, 7}));
  EXPECT_LE(max_abs_diff(r, m), 1e-9);
}

TEST(Pyramid, OneLevelIsPaddedSubband) {
  std::mt19937_64 rng(11);
  const Matrix m = test::random_matrix(rng, 7, 9);
  const SubbandPyramid p = pyramid_forward(m, 1, TransformOptions{});
  const SubbandSet s = subband_forward(pad_even(m), TransformOptions{});
  EXPECT_EQ(p.levels[0].V, s.V);
  EXPECT_EQ(p.levels[0].ids, s.ids);
  EXPECT_EQ(p.coarse_A, s.A);
}

TEST(Pyramid, LevelLimits) {
  EXPECT_THROW(pyramid_input_dims({8, 8}, 0), Error);
  EXPECT_NO_THROW(pyramid_input_dims({8, 8}, 3));   // 8 -> 4 -> 2
  EXPECT_THROW(pyramid_input_dims({8, 8}, 4), Error);
  EXPECT_NO_THROW(pyramid_input_dims({5, 7}, 3));   // 5x7 -> 3x4 -> 2x2
  EXPECT_THROW(pyramid_input_dims({5, 7}, 4), Error);
  EXPECT_THROW(pyramid_input_dims({1, 8}, 1), Error);
}

TEST(Pyramid, RoundTrip64FourLevels) {
  std::mt19937_64 rng(12);
  const Matrix m = test::random_matrix(rng, 64, 64);
  TransformOptions opt;
  opt.scaling = Scaling::scaled;
  EXPECT_LE(max_abs_diff(pyramid_inverse(pyramid_forward(m, 4, opt)), m), 1e-6);
}

TEST(Pyramid, PerfectReconstructionSweep) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> size(2, 90);
  for (int i = 0; i < 60; ++i) {
    const Matrix m = test::random_matrix(rng, size(rng), size(rng), -300.0, 300.0);
    int max_levels = 0;
    for (int l = 1; l <= 6; ++l) {
      try {
        (void)pyramid_input_dims(m.dims(), l);
        max_levels = l;
      } catch (const Error&) {
        break;
      }
    }
    ASSERT_GE(max_levels, 1);
    for (BasisMode mode : {BasisMode::per_block, BasisMode::global, BasisMode::fixed}) {
      TransformOptions opt;
      opt.mode = mode;
      opt.fixed_id = static_cast<BasisId>(i % 4);
      opt.scaling = i % 2 ? Scaling::scaled : Scaling::literal;
      EXPECT_LE(max_abs_diff(pyramid_inverse(pyramid_forward(m, max_levels, opt)), m), 1e-6);
    }
  }
}

TEST(Pyramid, ConstantInputHasNoDetailAtAnyLevel) {
  const Matrix m(20, 12, 17.0);
  const SubbandPyramid p = pyramid_forward(m, 3, TransformOptions{});
  for (const auto& lvl : p.levels) {
    for (const Matrix* x : {&lvl.V, &lvl.H, &lvl.D}) {
      for (double v : x->data()) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(Pyramid, InconsistentBookkeepingRejected) {
  SubbandPyramid p = pyramid_forward(Matrix(8, 8, 1.0), 2, TransformOptions{});
  p.coarse_A = Matrix(3, 3);
  EXPECT_THROW(pyramid_inverse(p), Error);
  p = pyramid_forward(Matrix(8, 8, 1.0), 2, TransformOptions{});
  p.orig_dims.pop_back();
  EXPECT_THROW(pyramid_inverse(p), Error);
}

}  // namespace
}  // namespace ahc
