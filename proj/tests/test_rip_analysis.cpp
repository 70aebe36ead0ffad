#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <limits>

#include "blockcs/combinatorics.hpp"
#include "blockcs/error.hpp"
#include "blockcs/random.hpp"
#include "blockcs/rip_analysis.hpp"
#include "blockcs/sensing.hpp"

namespace blockcs {
namespace {

using Big = boost::multiprecision::cpp_dec_float_50;

// 50-digit evaluation of both bounds written out term by term.
Big big_noise_term(Big t, Big delta, Big rho) {
  using boost::multiprecision::sqrt;
  const Big root = sqrt(t);
  const Big tt = root > t ? root : t;
  return 2 * sqrt(Big(2)) * rho * sqrt(1 + delta) / (t + (t - 4) * delta) * tt;
}

Big big_eq39(Big t, Big s, Big delta, Big rho, Big tail) {
  using boost::multiprecision::sqrt;
  const Big denom = t + (t - 4) * delta;
  const Big inner = (8 * delta + 4 * sqrt(denom * delta)) / denom + 1;
  return big_noise_term(t, delta, rho) + Big(1) / 2 * sqrt(2 / s) * inner * tail;
}

Big big_eq40(Big t, Big s, Big delta, Big rho, Big tail) {
  using boost::multiprecision::sqrt;
  const Big denom = t + (t - 4) * delta;
  const Big inner = (4 * delta + 2 * sqrt(denom * delta)) / denom + sqrt(Big(2));
  return big_noise_term(t, delta, rho) + sqrt(2 / s) * inner * tail;
}

TEST(ExactRic, IdentityIsIsometry) {
  auto st = BlockStructure({2, 1, 3, 2});
  auto id = identity_matrix(st);
  for (int s = 1; s <= 4; ++s) EXPECT_EQ(exact_block_ric(id, s).delta, 0.0);
}

TEST(ExactRic, ScaledIdentity) {
  auto st = BlockStructure::uniform(5, 2);
  SensingMatrix phi(2.0 * Matrix::Identity(10, 10), st);
  auto cert = exact_block_ric(phi, 3);
  EXPECT_NEAR(cert.delta, 3.0, 1e-12);
  EXPECT_EQ(cert.supports_enumerated, 10u);
}

TEST(ExactRic, SharpnessOperator) {
  auto inst = sharpness_instance(1.0, 2, 2, 6);
  EXPECT_NEAR(exact_block_ric(inst.phi, 2).delta, 1.0 / 3.0, 1e-10);
}

TEST(ExactRic, RangeAndCap) {
  auto phi = gen_gaussian(4, BlockStructure::uniform(6, 1), 3);
  EXPECT_THROW(exact_block_ric(phi, 0), ParameterError);
  EXPECT_THROW(exact_block_ric(phi, 7), ParameterError);
  try {
    exact_block_ric(phi, 3, RicOptions{10, 1});
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.required(), 20u);
  }
}

TEST(ExactRic, ThreadCountDoesNotChangeCertificate) {
  auto phi = gen_gaussian(8, BlockStructure::uniform(10, 2), 77);
  auto serial = exact_block_ric(phi, 3);
  auto parallel = exact_block_ric(phi, 3, RicOptions{1'000'000, 4});
  EXPECT_EQ(serial.delta, parallel.delta);
  EXPECT_EQ(serial.worst_support, parallel.worst_support);
  EXPECT_EQ(serial.supports_enumerated, parallel.supports_enumerated);
}

TEST(ExactRic, MonotoneInOrder) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto phi = gen_gaussian(10, BlockStructure::uniform(7, 2), seed);
    double prev = 0.0;
    for (int s = 1; s <= 7; ++s) {
      const double d = exact_block_ric(phi, s).delta;
      EXPECT_GE(d, prev);
      prev = d;
    }
  }
}

TEST(ExactRic, DefinitionConsistency) {
  auto st = BlockStructure::uniform(8, 2);
  auto phi = gen_gaussian(9, st, 404);
  const int s = 2;
  auto cert = exact_block_ric(phi, s);
  Rng rng(405);
  for (int rep = 0; rep < 1000; ++rep) {
    auto x = random_block_sparse(rng, st, random_support(rng, 8, s));
    x *= 1.0 / x.coeffs().norm();
    const double energy = apply(phi, x).squaredNorm();
    EXPECT_GE(energy, 1.0 - cert.delta - 1e-10);
    EXPECT_LE(energy, 1.0 + cert.delta + 1e-10);
  }
}

TEST(ExactRic, CertificateTightness) {
  auto phi = gen_gaussian(7, BlockStructure({1, 2, 2, 1, 3}), 12);
  auto cert = exact_block_ric(phi, 2);
  auto [lo, hi] = gram_extremes(phi, cert.worst_support);
  EXPECT_NEAR(std::max(hi - 1.0, 1.0 - lo), cert.delta, 1e-12);
  // min_eig and max_eig are the extremes over all supports.
  EXPECT_LE(cert.min_eig, lo);
  EXPECT_GE(cert.max_eig, hi);
  EXPECT_NEAR(std::max(cert.max_eig - 1.0, 1.0 - cert.min_eig), cert.delta, 1e-15);
}

TEST(CheckCondition, Thresholds) {
  EXPECT_DOUBLE_EQ(check_condition(0.0, 1.0, 2).threshold, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(check_condition(0.0, 0.5, 4).threshold, 1.0 / 7.0);
  EXPECT_TRUE(check_condition(0.33, 1.0, 2).satisfied);
  EXPECT_FALSE(check_condition(0.34, 1.0, 2).satisfied);
  EXPECT_EQ(check_condition(0.34, 1.0, 2).reason, ConditionReason::kDeltaAboveThreshold);
  EXPECT_FALSE(check_condition(1.0 / 3.0, 1.0, 2).satisfied);
}

TEST(CheckCondition, RejectsBadOrders) {
  auto r = check_condition(0.0, 4.0 / 3.0, 3);
  EXPECT_FALSE(r.satisfied);
  EXPECT_EQ(r.reason, ConditionReason::kTOutOfRange);
  EXPECT_EQ(check_condition(0.0, 0.0, 3).reason, ConditionReason::kTOutOfRange);
  r = check_condition(0.0, 1.0, 1);
  EXPECT_FALSE(r.satisfied);
  EXPECT_EQ(r.reason, ConditionReason::kOrderTooSmall);
  EXPECT_EQ(check_condition(std::numeric_limits<double>::quiet_NaN(), 1.0, 2).reason,
            ConditionReason::kInvalidInput);
}

TEST(CheckCondition, NonIntegerOrder) {
  auto r = check_condition(0.1, 0.9, 3);
  EXPECT_FALSE(r.order_is_integer);
  EXPECT_EQ(r.effective_order, 2);
  EXPECT_TRUE(r.satisfied);
  r = check_condition(0.1, 2.0 / 3.0, 3);
  EXPECT_TRUE(r.order_is_integer);
  EXPECT_EQ(r.effective_order, 2);
}

TEST(Bounds, TrivialCollapses) {
  EXPECT_EQ(error_bound_eq39(1.0, 2, 0.0, 0.0, 0.0).bound, 0.0);
  EXPECT_EQ(error_bound_eq39(0.7, 5, 0.0, 0.0, 0.0).bound, 0.0);
  EXPECT_NEAR(error_bound_eq39(1.0, 2, 0.0, 1.0, 0.0).bound, 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(error_bound_eq40(1.0, 2, 0.0, 0.0, 1.0).bound, std::sqrt(2.0), 1e-15);
}

TEST(Bounds, TTildeIsMaxOfRootAndT) {
  EXPECT_EQ(error_bound_eq39(0.25, 8, 0.0, 1.0, 0.0).t_tilde, 0.5);
  EXPECT_EQ(error_bound_eq39(1.2, 5, 0.0, 1.0, 0.0).t_tilde, 1.2);
}

TEST(Bounds, HighPrecisionOracle) {
  const auto r39 = error_bound_eq39(1.0, 4, 0.25, 0.1, 0.5);
  const auto r40 = error_bound_eq40(1.0, 4, 0.25, 0.1, 0.5);
  const Big t(1), s(4), delta("0.25"), rho("0.1"), tail("0.5");
  EXPECT_NEAR(r39.bound, big_eq39(t, s, delta, rho, tail).convert_to<double>(), 1e-9);
  EXPECT_NEAR(r40.bound, big_eq40(t, s, delta, rho, tail).convert_to<double>(), 1e-9);
  // Frozen values from an independent 50-digit mpmath evaluation.
  EXPECT_NEAR(r39.bound, 3.5630081029236311871, 1e-12);
  EXPECT_NEAR(r40.bound, 3.8862314076269943060, 1e-12);
}

TEST(Bounds, HighPrecisionGrid) {
  for (double t : {0.3, 0.8, 1.0, 1.25}) {
    for (int s : {2, 3, 7}) {
      if (t * s < 2.0) continue;
      const double thr = t / (4.0 - t);
      for (double frac : {0.0, 0.3, 0.9}) {
        const double delta = frac * thr;
        const auto r = error_bound_eq39(t, s, delta, 0.2, 1.3);
        const double ref = big_eq39(Big(t), Big(s), Big(delta), Big(0.2), Big(1.3)).convert_to<double>();
        EXPECT_NEAR(r.bound, ref, 1e-12 * std::max(1.0, ref));
        EXPECT_NEAR(r.bound, r.noise_coeff * 0.2 + r.tail_coeff * 1.3, 1e-12 * r.bound);
      }
    }
  }
}

TEST(Bounds, Preconditions) {
  EXPECT_THROW(error_bound_eq39(1.0, 2, 0.34, 0.1, 0.0), PreconditionError);
  EXPECT_THROW(error_bound_eq40(1.5, 2, 0.0, 0.1, 0.0), PreconditionError);
  EXPECT_THROW(error_bound_eq39(1.0, 1, 0.0, 0.1, 0.0), PreconditionError);
  EXPECT_THROW(error_bound_eq39(1.0, 2, 0.1, -0.1, 0.0), ParameterError);
  EXPECT_THROW(error_bound_eq40(1.0, 2, 0.1, 0.1, -1.0), ParameterError);
}

TEST(Bounds, FirstNeverExceedsSecond) {
  Rng rng(8);
  for (int rep = 0; rep < 2000; ++rep) {
    const double t = rng.uniform(0.05, 4.0 / 3.0 - 1e-6);
    const int s = std::max(2, static_cast<int>(std::ceil(2.0 / t))) + static_cast<int>(rng.below(5));
    const double delta = rng.uniform() * t / (4.0 - t) * 0.999;
    const double rho = rng.uniform(0.0, 2.0), tail = rng.uniform(0.0, 5.0);
    const auto a = error_bound_eq39(t, s, delta, rho, tail);
    const auto b = error_bound_eq40(t, s, delta, rho, tail);
    EXPECT_LT(a.tail_coeff, b.tail_coeff);
    EXPECT_EQ(a.noise_coeff, b.noise_coeff);
    EXPECT_LE(a.bound, b.bound);
  }
}

TEST(RicScaling, Formula) {
  EXPECT_EQ(lemma24_bound(0.0, 2.0), 0.0);
  EXPECT_NEAR(lemma24_bound(0.1, 2.0), 0.3, 1e-15);
  EXPECT_THROW(lemma24_bound(0.1, 1.5), ParameterError);
  EXPECT_THROW(lemma24_bound(-0.1, 2.0), ParameterError);
}

TEST(RicScaling, HoldsOnRandomMatrices) {
  auto st = BlockStructure::uniform(6, 2);
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    auto phi = gen_gaussian(6, st, seed);
    const double d2 = exact_block_ric(phi, 2).delta;
    const double d4 = exact_block_ric(phi, 4).delta;
    EXPECT_LE(d4, lemma24_bound(d2, 2.0) + 1e-12) << "seed " << seed;
  }
}

}  // namespace
}  // namespace blockcs
