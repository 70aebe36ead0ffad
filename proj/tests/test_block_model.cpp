#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "blockcs/block_model.hpp"
#include "blockcs/combinatorics.hpp"
#include "blockcs/error.hpp"
#include "test_helpers.hpp"

namespace blockcs {
namespace {

BlockSignal small_signal() {
  Vector c(4);
  c << 3, 4, 0, 0;
  return BlockSignal(BlockStructure::uniform(2, 2), c);
}

TEST(BlockStructure, OffsetsAndDims) {
  BlockStructure st({2, 3, 1});
  EXPECT_EQ(st.num_blocks(), 3);
  EXPECT_EQ(st.total_dim(), 6);
  EXPECT_EQ(st.offset(0), 0);
  EXPECT_EQ(st.offset(1), 2);
  EXPECT_EQ(st.offset(2), 5);
  EXPECT_EQ(st.support_dim({0, 2}), 3);
  EXPECT_EQ(st.coordinates({1}), (std::vector<int>{2, 3, 4}));
}

TEST(BlockStructure, RejectsBadLengths) {
  EXPECT_THROW(BlockStructure({}), ParameterError);
  EXPECT_THROW(BlockStructure({2, 0}), ParameterError);
  EXPECT_THROW(BlockStructure::uniform(3, -1), ParameterError);
}

TEST(BlockStructure, SingleBlockAllowed) {
  auto st = BlockStructure::uniform(1, 5);
  EXPECT_EQ(st.num_blocks(), 1);
  BlockSignal x(st, Vector::Ones(5));
  EXPECT_DOUBLE_EQ(mixed_norm_2_1(x), std::sqrt(5.0));
  auto approx = best_block_approx(x, 0);
  EXPECT_EQ(mixed_norm_2_0(approx.head), 0);
}

TEST(BlockSignal, WrongLengthRejected) {
  EXPECT_THROW(BlockSignal(BlockStructure::uniform(2, 2), Vector::Zero(3)), ParameterError);
}

TEST(BlockSignal, BlockViewMatchesCoefficients) {
  BlockStructure st({1, 3, 2});
  Vector c(6);
  c << 1, 2, 3, 4, 5, 6;
  BlockSignal x(st, c);
  EXPECT_EQ(x.block(1).size(), 3);
  EXPECT_EQ(x.block(1)(0), 2);
  EXPECT_EQ(x.block(2)(1), 6);
}

TEST(MixedNorms, HandExample) {
  auto x = small_signal();
  EXPECT_DOUBLE_EQ(mixed_norm_2_1(x), 5.0);
  EXPECT_EQ(mixed_norm_2_0(x), 1);
  EXPECT_DOUBLE_EQ(mixed_norm_2_inf(x), 5.0);
  EXPECT_EQ(block_support(x), (BlockSet{0}));
}

TEST(MixedNorms, ZeroVector) {
  BlockSignal x(BlockStructure::uniform(4, 3));
  EXPECT_EQ(mixed_norm_2_1(x), 0.0);
  EXPECT_EQ(mixed_norm_2_0(x), 0);
  EXPECT_EQ(mixed_norm_2_inf(x), 0.0);
  EXPECT_TRUE(block_support(x).empty());
}

TEST(MixedNorms, AllBlocksActive) {
  Rng rng(3);
  auto st = BlockStructure::uniform(7, 2);
  auto x = test::random_signal(rng, st);
  EXPECT_EQ(mixed_norm_2_0(x), 7);
}

TEST(MixedNorms, ZeroTestIsExact) {
  auto st = BlockStructure::uniform(3, 1);
  Vector c(3);
  c << 1e-300, 0.0, -0.0;
  BlockSignal x(st, c);
  EXPECT_EQ(mixed_norm_2_0(x), 1);
  EXPECT_EQ(block_support(x, 1e-12).size(), 0u);
}

TEST(MixedNorms, ConstructedSupport) {
  auto st = BlockStructure::uniform(6, 2);
  BlockSignal x(st);
  x.block(2).setConstant(1.0);
  x.block(5)(1) = -2.0;
  EXPECT_EQ(block_support(x), (BlockSet{2, 5}));
}

TEST(MixedNorms, MatchPerBlockOracle) {
  Rng rng(11);
  auto st = BlockStructure::uniform(5, 4);
  for (int rep = 0; rep < 20; ++rep) {
    auto x = test::random_signal(rng, st);
    auto norms = test::naive_block_norms(x);
    double sum = 0.0;
    for (double v : norms) sum += v;
    EXPECT_NEAR(mixed_norm_2_1(x), sum, 1e-12);
    EXPECT_NEAR(mixed_norm_2_inf(x), *std::max_element(norms.begin(), norms.end()), 1e-12);
  }
}

TEST(MixedNorms, TwoTwoIsEuclidean) {
  Rng rng(5);
  BlockStructure st({1, 4, 2, 3});
  for (int rep = 0; rep < 10; ++rep) {
    auto x = test::random_signal(rng, st);
    EXPECT_NEAR(mixed_norm_2_2(x), x.coeffs().norm(), 1e-13);
  }
}

TEST(MixedNorms, NormChainOnSparseSignals) {
  Rng rng(17);
  auto st = BlockStructure::uniform(10, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const int s = 1 + static_cast<int>(rng.below(10));
    auto x = random_block_sparse(rng, st, random_support(rng, 10, s));
    const double inf = mixed_norm_2_inf(x), two = mixed_norm_2_2(x), one = mixed_norm_2_1(x);
    const double slack = 1e-10 * one;
    EXPECT_LE(inf, two + slack);
    EXPECT_LE(two, one + slack);
    EXPECT_LE(one, std::sqrt(static_cast<double>(s)) * two + slack);
  }
}

TEST(MixedNorms, TriangleAndHomogeneity) {
  Rng rng(23);
  auto st = BlockStructure({2, 2, 3, 1, 4});
  for (int rep = 0; rep < 100; ++rep) {
    auto x = test::random_signal(rng, st);
    auto y = test::random_signal(rng, st);
    const double c = rng.uniform(-3.0, 3.0);
    EXPECT_LE(mixed_norm_2_1(x + y), mixed_norm_2_1(x) + mixed_norm_2_1(y) + 1e-10);
    EXPECT_NEAR(mixed_norm_2_1(c * x), std::abs(c) * mixed_norm_2_1(x), 1e-10);
  }
}

TEST(BestBlockApprox, SparseSignalIsItsOwnHead) {
  Rng rng(2);
  auto st = BlockStructure::uniform(8, 2);
  auto x = random_block_sparse(rng, st, {1, 4, 6});
  auto a = best_block_approx(x, 3);
  EXPECT_EQ(a.head.coeffs(), x.coeffs());
  EXPECT_EQ(mixed_norm_2_1(a.tail), 0.0);
  EXPECT_EQ(a.kept_blocks, (BlockSet{1, 4, 6}));
}

TEST(BestBlockApprox, ZeroTerms) {
  auto x = small_signal();
  auto a = best_block_approx(x, 0);
  EXPECT_EQ(mixed_norm_2_1(a.head), 0.0);
  EXPECT_EQ(a.tail.coeffs(), x.coeffs());
}

TEST(BestBlockApprox, RejectsOutOfRange) {
  auto x = small_signal();
  EXPECT_THROW(best_block_approx(x, 3), ParameterError);
  EXPECT_THROW(best_block_approx(x, -1), ParameterError);
}

TEST(BestBlockApprox, TiesGoToLowestIndex) {
  auto st = BlockStructure::uniform(4, 1);
  Vector c(4);
  c << 1, -2, 2, 1;
  auto a = best_block_approx(BlockSignal(st, c), 2);
  EXPECT_EQ(a.kept_blocks, (BlockSet{1, 2}));
  auto b = best_block_approx(BlockSignal(st, c), 3);
  EXPECT_EQ(b.kept_blocks, (BlockSet{0, 1, 2}));
}

TEST(BestBlockApprox, MatchesExhaustiveSelection) {
  Rng rng(31);
  auto st = BlockStructure::uniform(7, 3);
  for (int rep = 0; rep < 50; ++rep) {
    auto x = test::random_signal(rng, st);
    auto norms = test::naive_block_norms(x);
    double best = -1.0;
    for_each_combination(7, 2, [&](const std::vector<int>& c) {
      best = std::max(best, norms[c[0]] + norms[c[1]]);
    });
    auto a = best_block_approx(x, 2);
    EXPECT_NEAR(mixed_norm_2_1(a.head), best, 1e-12);
    EXPECT_EQ((a.head + a.tail).coeffs(), x.coeffs());
    EXPECT_EQ(mixed_norm_2_0(a.head), 2);
    double kept_min = 1e300, dropped_max = 0.0;
    for (int i = 0; i < 7; ++i) {
      const bool kept = std::find(a.kept_blocks.begin(), a.kept_blocks.end(), i) != a.kept_blocks.end();
      if (kept) {
        kept_min = std::min(kept_min, norms[i]);
        EXPECT_EQ(a.tail.block(i).norm(), 0.0);
      } else {
        dropped_max = std::max(dropped_max, norms[i]);
        EXPECT_EQ(a.head.block(i).norm(), 0.0);
      }
    }
    EXPECT_GE(kept_min, dropped_max);
  }
}

TEST(BestBlockApprox, IdempotentOnHead) {
  Rng rng(41);
  auto st = BlockStructure({3, 1, 2, 2, 4, 1});
  for (int rep = 0; rep < 30; ++rep) {
    auto x = test::random_signal(rng, st);
    const int s = static_cast<int>(rng.below(7));
    auto head = best_block_approx(x, s).head;
    EXPECT_EQ(best_block_approx(head, s).head.coeffs(), head.coeffs());
  }
}

TEST(Combinatorics, BinomialAndEnumeration) {
  EXPECT_EQ(binomial(12, 2), 66u);
  EXPECT_EQ(binomial(24, 12), 2704156u);
  EXPECT_EQ(binomial(5, 6), 0u);
  int count = 0;
  std::vector<int> prev;
  for_each_combination(6, 3, [&](const std::vector<int>& c) {
    if (!prev.empty()) EXPECT_TRUE(std::lexicographical_compare(prev.begin(), prev.end(), c.begin(), c.end()));
    prev = c;
    ++count;
  });
  EXPECT_EQ(count, 20);
}

}  // namespace
}  // namespace blockcs
