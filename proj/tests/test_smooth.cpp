#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <vector>

#include "smoothlab/saddle.hpp"
#include "smoothlab/smooth.hpp"

using namespace smoothlab;

namespace {

u64 trial_gpf(u64 n) {
  u64 best = 1;
  for (u64 p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  }
  return n > 1 ? n : best;
}

// w-smooth part of n: the largest w-smooth divisor.
u64 smooth_part(u64 n, u64 w) {
  u64 part = 1;
  for (u64 p = 2; p <= w; ++p) {
    if (!is_prime(p)) continue;
    while (n % p == 0) {
      n /= p;
      part *= p;
    }
  }
  return part;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("smoothlab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Sieve, SmallValues) {
  const auto s1 = build_sieve(1);
  EXPECT_EQ(s1[1], 1u);
  const auto s = build_sieve(10);
  EXPECT_EQ(s[8], 2u);
  EXPECT_EQ(s[10], 5u);
  EXPECT_EQ(s[7], 7u);
  EXPECT_THROW(build_sieve(0), Error);
}

TEST(Sieve, MatchesTrialDivision) {
  const auto s = build_sieve(10000);
  for (u64 n = 1; n <= 10000; ++n) ASSERT_EQ(s[n], trial_gpf(n)) << n;
}

TEST(Sieve, GpfOfProductIsMax) {
  const auto s = build_sieve(100000);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 2000; ++k) {
    const u64 m = 1 + rng() % 300, n = 1 + rng() % 300;
    ASSERT_EQ(s[m * n], std::max(s[m], s[n]));
  }
}

TEST(Sieve, BudgetExceeded) {
  try {
    build_sieve(1000, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
  }
}

TEST(SieveCache, ByteLayout) {
  const auto dir = scratch_dir("layout");
  const auto s = build_sieve(6);
  const auto path = sieve_cache_path(dir, 6);
  save_sieve(s, path);
  std::ifstream in(path, std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(bytes.size(), 6u + 8u + 4u * 6u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 6), "SMGPF1");
  EXPECT_EQ(bytes[6], 6);
  for (int b = 7; b < 14; ++b) EXPECT_EQ(bytes[b], 0);
  // gpf(1..6) = 1, 2, 3, 2, 5, 3
  const std::vector<unsigned> expected{1, 2, 3, 2, 5, 3};
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(bytes[14 + 4 * k], expected[k]);
    EXPECT_EQ(bytes[15 + 4 * k], 0);
  }
}

TEST(SieveCache, RoundTripAndLoadOrBuild) {
  const auto dir = scratch_dir("roundtrip");
  const auto built = load_or_build_sieve(70000, dir);
  ASSERT_TRUE(std::filesystem::exists(sieve_cache_path(dir, 70000)));
  const auto loaded = load_or_build_sieve(70000, dir);
  EXPECT_EQ(built.gpf, loaded.gpf);
  EXPECT_EQ(loaded.gpf, build_sieve(70000).gpf);
}

TEST(SieveCache, RejectsCorruptFiles) {
  const auto dir = scratch_dir("corrupt");
  const auto path = dir / "bad.bin";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTGPF-and-some-more-bytes";
  }
  try {
    load_sieve(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::format);
  }
  save_sieve(build_sieve(100), path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 3);
  EXPECT_THROW(load_sieve(path), Error);
  EXPECT_THROW(load_sieve(dir / "missing.bin"), Error);
}

TEST(SmoothSet, Examples) {
  const auto s = build_sieve(100);
  EXPECT_EQ(smooth_set(s, 2, 10).members, (std::vector<u64>{1, 2, 4, 8}));
  const auto all = smooth_set(s, 10, 10);
  EXPECT_EQ(all.psi(), 10u);
  EXPECT_EQ(smooth_set(s, 5).psi(), 34u);
  EXPECT_THROW(smooth_set(s, 1), Error);
  EXPECT_THROW(smooth_set(s, 5, 101), Error);
}

TEST(SmoothSet, Psi100_5FromExponentEnumeration) {
  u64 count = 0;
  for (u64 a = 1; a <= 100; a *= 2)
    for (u64 b = a; b <= 100; b *= 3)
      for (u64 c = b; c <= 100; c *= 5) ++count;
  EXPECT_EQ(count, 34u);
  EXPECT_EQ(smooth_set(build_sieve(100), 5).psi(), count);
}

TEST(SmoothSet, MatchesTrialDivisionForEveryY) {
  const u64 N = 2000;
  const auto s = build_sieve(N);
  for (u64 y = 2; y <= N; ++y) {
    std::vector<u64> oracle;
    for (u64 n = 1; n <= N; ++n)
      if (trial_gpf(n) <= y) oracle.push_back(n);
    ASSERT_EQ(smooth_set(s, y).members, oracle) << y;
  }
  const auto big = build_sieve(10000);
  for (u64 y : {2, 3, 10, 97, 100, 1000, 9973, 10000}) {
    std::vector<u64> oracle;
    for (u64 n = 1; n <= 10000; ++n)
      if (trial_gpf(n) <= y) oracle.push_back(n);
    ASSERT_EQ(smooth_set(big, y).members, oracle) << y;
  }
}

TEST(SmoothSet, MonotoneInNAndY) {
  const auto s = build_sieve(5000);
  for (u64 y = 2; y < 60; ++y) {
    u64 prev = 0;
    for (u64 N = 100; N <= 5000; N += 100) {
      const u64 psi = smooth_set(s, y, N).psi();
      ASSERT_GE(psi, prev);
      ASSERT_LE(psi, smooth_set(s, y + 1, N).psi());
      prev = psi;
    }
  }
}

TEST(Progressions, Examples) {
  const auto s = build_sieve(10);
  const auto set2 = smooth_set(s, 2, 10);
  EXPECT_EQ(psi_progression(set2, 1, 0), set2.psi());
  EXPECT_EQ(psi_progression(set2, 4, 0), 2u);
  EXPECT_EQ(psi_progression(set2, 4, -4), 2u);
  EXPECT_EQ(psi_coprime(set2, 1), set2.psi());
  EXPECT_EQ(psi_coprime(smooth_set(s, 10, 10), 2), 5u);
}

TEST(Progressions, PartitionIdentity) {
  const auto s = build_sieve(20000);
  const auto set = smooth_set(s, 50);
  for (u64 q = 1; q <= 100; ++q) {
    const auto table = psi_progression_table(set, q);
    ASSERT_EQ(std::accumulate(table.begin(), table.end(), u64{0}), set.psi());
  }
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const u64 N = 100 + rng() % 19900, y = 2 + rng() % 200, q = 1 + rng() % 60;
    const auto sub = smooth_set(s, y, N);
    u64 total = 0;
    for (u64 a = 0; a < q; ++a) total += psi_progression(sub, q, static_cast<i64>(a));
    ASSERT_EQ(total, sub.psi());
  }
}

TEST(Progressions, CoprimeIdentity) {
  const auto set = smooth_set(build_sieve(20000), 30);
  for (u64 q = 1; q <= 30; ++q) {
    u64 sum = 0;
    for (u64 a = 0; a < q; ++a)
      if (std::gcd(a, q) == 1) sum += psi_progression(set, q, static_cast<i64>(a));
    ASSERT_EQ(psi_coprime(set, q), sum) << q;
  }
}

TEST(Granville, TrivialModuli) {
  const auto set = smooth_set(build_sieve(10000), 100);
  EXPECT_EQ(granville_deviation(set, 1), 0.0);
  // only the class 1 mod 2 is coprime, and it carries all of Psi_2
  EXPECT_EQ(granville_deviation(set, 2), 0.0);
}

TEST(Granville, DeviationShrinksWithY) {
  const auto s = shared_sieve(1000000);
  const double d_big = granville_deviation(smooth_set(*s, 1000), 3);
  const double d_small = granville_deviation(smooth_set(*s, 100), 3);
  EXPECT_LT(d_big, d_small);
}

TEST(WSmoothDivisors, Examples) {
  const auto s = build_sieve(200);
  EXPECT_EQ(w_smooth_divisors(s, 2, 10), (std::vector<u64>{1, 2, 4, 8}));
  EXPECT_EQ(w_smooth_divisors(s, 3, 12), (std::vector<u64>{1, 2, 3, 4, 6, 8, 9, 12}));
  EXPECT_EQ(w_smooth_divisors(s, 5, 100).size(), 34u);
  EXPECT_THROW(w_smooth_divisors(s, 5, 201), Error);
}

TEST(RankinTail, ClosedForms) {
  const double N = 1e6;
  EXPECT_NEAR(rankin_tail(1000000, 2, 0.5), std::pow(N, 0.25) / (1.0 - std::pow(2.0, -0.5)), 1e-9);
  const double limit = 1.0 / ((1.0 - 0.5) * (1.0 - 1.0 / 3.0) * (1.0 - 0.2));
  EXPECT_NEAR(rankin_tail(1000000, 5, 1e-12), limit, 1e-6);
  try {
    rankin_tail(1000, 3, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::divergence);
  }
  EXPECT_THROW(rankin_tail(1000, 1, 0.5), Error);
}

TEST(RankinTail, DominatesDiscardedMass) {
  const auto s = shared_sieve(1000000);
  for (u64 N : {10000, 100000, 1000000}) {
    const auto set = smooth_set(*s, 100, N);
    const double alpha = alpha_empirical(set);
    const double root = std::sqrt(static_cast<double>(N));
    for (u64 w : {2, 3, 5, 7}) {
      u64 discarded = 0;
      for (u64 m : set.members) discarded += static_cast<double>(smooth_part(m, w)) > root;
      EXPECT_LE(static_cast<double>(discarded), rankin_tail(N, w, alpha))
          << "N=" << N << " w=" << w;
    }
  }
}
