#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "smoothlab/arith.hpp"

using namespace smoothlab;

namespace {

bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST(Primes, SmallLimits) {
  EXPECT_EQ(primes_upto(10).primes, (std::vector<u64>{2, 3, 5, 7}));
  EXPECT_TRUE(primes_upto(1).primes.empty());
  EXPECT_TRUE(primes_upto(0).primes.empty());
}

TEST(Primes, MatchesTrialDivision) {
  const auto t = primes_upto(100);
  EXPECT_EQ(t.primes.size(), 25u);
  std::vector<u64> oracle;
  for (u64 n = 0; n <= 5000; ++n)
    if (trial_prime(n)) oracle.push_back(n);
  EXPECT_EQ(primes_upto(5000).primes, oracle);
}

TEST(MultiplicativeTables, Conventions) {
  const auto t = multiplicative_tables(100);
  EXPECT_EQ(t.mobius[1], 1);
  EXPECT_EQ(t.phi[1], 1u);
  EXPECT_EQ(t.omega[1], 0);
  EXPECT_EQ(t.mobius[12], 0);
  EXPECT_EQ(t.phi[12], 4u);
  EXPECT_EQ(t.omega[12], 2);

  int mobius_sum = 0;
  for (u64 d = 1; d <= 30; ++d)
    if (30 % d == 0) mobius_sum += t.mobius[d];
  EXPECT_EQ(mobius_sum, 0);
  EXPECT_THROW(multiplicative_tables(0), Error);
}

TEST(MultiplicativeTables, AgreeWithFactorisation) {
  const u64 limit = 10000;
  const auto t = multiplicative_tables(limit);
  for (u64 n = 1; n <= limit; ++n) {
    const auto f = factorize(n);
    bool squarefree = true;
    for (auto [p, e] : f) squarefree = squarefree && e == 1;
    ASSERT_EQ(t.mobius[n] == 0, !squarefree) << n;
    ASSERT_EQ(t.mobius[n], mobius(n)) << n;
    ASSERT_EQ(t.phi[n], euler_phi(n)) << n;
    ASSERT_EQ(t.omega[n], static_cast<int>(f.size())) << n;
    if (trial_prime(n)) {
      ASSERT_EQ(t.phi[n], n - 1);
    }
  }
}

TEST(MultiplicativeTables, TotientDivisorSum) {
  const u64 limit = 10000;
  const auto t = multiplicative_tables(limit);
  std::vector<u64> sum(limit + 1, 0);
  for (u64 d = 1; d <= limit; ++d)
    for (u64 m = d; m <= limit; m += d) sum[m] += t.phi[d];
  for (u64 n = 1; n <= limit; ++n) ASSERT_EQ(sum[n], n);
}

TEST(MultiplicativeTables, CachedInstanceIsShared) {
  auto a = cached_multiplicative_tables(500);
  auto b = cached_multiplicative_tables(500);
  EXPECT_EQ(a.get(), b.get());
}

TEST(RamanujanSum, ClosedFormExamples) {
  for (i64 a = -5; a <= 5; ++a) EXPECT_DOUBLE_EQ(ramanujan_sum(1, a), 1.0);
  for (u64 q = 1; q <= 50; ++q) EXPECT_DOUBLE_EQ(ramanujan_sum(q, 0), static_cast<double>(euler_phi(q)));
  EXPECT_DOUBLE_EQ(ramanujan_sum(4, 1), 0.0);
  EXPECT_DOUBLE_EQ(ramanujan_sum(6, 1), 1.0);
  EXPECT_DOUBLE_EQ(ramanujan_sum(6, -1), 1.0);
}

TEST(RamanujanSum, BruteForceExamples) {
  const auto c41 = ramanujan_sum_bruteforce(4, 1);  // e(1/4) + e(3/4)
  EXPECT_NEAR(c41.real(), 0.0, 1e-12);
  EXPECT_NEAR(c41.imag(), 0.0, 1e-12);
  const auto c61 = ramanujan_sum_bruteforce(6, 1);
  EXPECT_NEAR(c61.real(), 1.0, 1e-12);
  EXPECT_NEAR(ramanujan_sum_bruteforce(5, 5).real(), 4.0, 1e-12);
}

TEST(RamanujanSum, ClosedMatchesBruteForce) {
  for (u64 q = 1; q <= 200; ++q) {
    for (u64 a = 0; a < q; ++a) {
      const auto brute = ramanujan_sum_bruteforce(q, static_cast<i64>(a));
      ASSERT_NEAR(brute.real(), ramanujan_sum(q, static_cast<i64>(a)), 1e-9) << q << " " << a;
      ASSERT_NEAR(brute.imag(), 0.0, 1e-9) << q << " " << a;
    }
  }
}

TEST(RamanujanSum, RootTableMatchesDirectPhases) {
  for (u64 q = 1; q <= 120; ++q) {
    const auto roots = fft::unit_roots<double>(q);
    for (i64 a = -3; a < static_cast<i64>(q); ++a)
      ASSERT_LT(std::abs(ramanujan_sum_bruteforce(q, a, roots) - ramanujan_sum_bruteforce(q, a)), 1e-12);
  }
  EXPECT_THROW(ramanujan_sum_bruteforce(5, 1, fft::unit_roots<double>(4)), Error);
}

TEST(RamanujanSum, MultiplicativeInModulus) {
  for (u64 q1 = 1; q1 <= 200; ++q1) {
    for (u64 q2 = 1; q1 * q2 <= 200; ++q2) {
      if (std::gcd(q1, q2) != 1) continue;
      for (u64 a = 0; a < q1 * q2; ++a) {
        const auto ia = static_cast<i64>(a);
        ASSERT_DOUBLE_EQ(ramanujan_sum(q1 * q2, ia), ramanujan_sum(q1, ia) * ramanujan_sum(q2, ia));
      }
    }
  }
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(1, 7), 1u);
  EXPECT_EQ(mod_inverse(3, 7), 5u);
  EXPECT_EQ(mod_inverse(-4, 7), 5u);
  EXPECT_EQ(mod_inverse(5, 1), 0u);
  try {
    mod_inverse(2, 4);
    FAIL() << "expected not_invertible";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_invertible);
  }
}

TEST(ModInverse, InvertsEveryUnit) {
  for (u64 q = 2; q <= 200; ++q) {
    for (u64 a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const u64 inv = mod_inverse(static_cast<i64>(a), q);
      ASSERT_LT(inv, q);
      ASSERT_EQ(a * inv % q, 1u);
    }
  }
}

TEST(Helpers, PrimorialAndNextPrime) {
  EXPECT_EQ(primorial(1.5), 1u);
  EXPECT_EQ(primorial(2.0), 2u);
  EXPECT_EQ(primorial(3.5), 6u);
  EXPECT_EQ(primorial(5.0), 30u);
  EXPECT_EQ(primorial(7.9), 210u);
  EXPECT_EQ(next_prime(14), 17u);
  EXPECT_EQ(next_prime(17), 17u);
  EXPECT_EQ(largest_prime_factor(1), 1u);
  EXPECT_EQ(largest_prime_factor(2 * 2 * 3 * 97), 97u);
}
