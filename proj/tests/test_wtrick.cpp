#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "smoothlab/random.hpp"
#include "smoothlab/wtrick.hpp"

using namespace smoothlab;

namespace {

bool smooth_by_trial(u64 x, u64 y) {
  for (u64 p = 2; p * p <= x; ++p)
    while (x % p == 0) {
      if (p > y) return false;
      x /= p;
    }
  return x <= y;
}

double nu_oracle(u64 n, const WContext& c) {
  const i64 m = static_cast<i64>(c.W * n) - static_cast<i64>(c.b2);
  if (m <= 0) return 0.0;
  const u64 x = c.b1 * static_cast<u64>(m);
  if (x > c.N || !smooth_by_trial(x, c.y)) return 0.0;
  double cw = 1.0;
  for (u64 p : {2, 3, 5, 7, 11, 13})
    if (c.W % p == 0) cw *= (1.0 - 1.0 / p) / (1.0 - std::pow(static_cast<double>(p), -c.alpha));
  return cw * std::pow(static_cast<double>(m), 1.0 - c.alpha) / c.alpha;
}

}  // namespace

TEST(Context, Defaults) {
  EXPECT_DOUBLE_EQ(default_w(1000000), 2.0);
  EXPECT_NEAR(default_w(static_cast<u64>(1e18)), std::max(2.0, 0.5 * std::log(std::log(std::log(1e18)))), 1e-12);

  const auto s = shared_sieve(1000000);
  const auto c = make_context(*s, 1000000, 100);
  EXPECT_EQ(c.W, 2u);
  EXPECT_EQ(c.b1, 1u);
  EXPECT_EQ(c.b2, 1u);
  EXPECT_EQ(c.Nb, 500001u);
  EXPECT_NEAR(c.alpha, alpha_empirical(smooth_set(*s, 100)), 1e-15);
  EXPECT_NEAR(c.CW, 0.5 / (1.0 - std::pow(2.0, -c.alpha)), 1e-14);

  ContextOptions o;
  o.w = 5.5;
  o.alpha = 0.6;
  o.b = std::pair<u64, u64>{4, 7};
  const auto c2 = make_context(1000000, 100, o);
  EXPECT_EQ(c2.W, 30u);
  EXPECT_EQ(c2.Nb, 1000000u / 120u + 1u);

  o.alpha_source = AlphaSource::saddle;
  o.alpha.reset();
  EXPECT_NEAR(make_context(1000000, 100, o).alpha, solve_alpha(1e6, 100).alpha, 1e-15);
}

TEST(Context, RejectsBadParameters) {
  ContextOptions o;
  o.alpha = 0.5;
  EXPECT_THROW(make_context(99, 10, o), Error);
  o.b = std::pair<u64, u64>{7, 1};  // 7 is not 2-smooth
  EXPECT_THROW(make_context(10000, 10, o), Error);
  o.b = std::pair<u64, u64>{128, 1};  // above sqrt(N)
  EXPECT_THROW(make_context(10000, 10, o), Error);
  o.b = std::pair<u64, u64>{1, 2};  // shares a factor with W = 2
  EXPECT_THROW(make_context(10000, 10, o), Error);
  o.b.reset();
  o.alpha = 1.0;
  EXPECT_THROW(make_context(10000, 10, o), Error);
  o.alpha.reset();
  EXPECT_THROW(make_context(10000, 10, o), Error);  // empirical needs a sieve
}

TEST(Nu, MatchesOracle) {
  const auto s = shared_sieve(1000000);
  for (auto [w, b1, b2] : std::vector<std::tuple<double, u64, u64>>{
           {2.0, 1, 1}, {3.0, 6, 5}, {5.0, 4, 7}, {7.0, 9, 1}}) {
    ContextOptions o;
    o.w = w;
    o.b = std::pair<u64, u64>{b1, b2};
    const auto c = make_context(*s, 50000, 40, o);
    const auto seq = nu_sequence(c, *s);
    ASSERT_EQ(seq.values.size(), c.Nb + 1);
    EXPECT_EQ(seq.values[0], 0.0);
    for (u64 n = 1; n <= c.Nb; ++n) {
      ASSERT_NEAR(seq.values[n], nu_oracle(n, c), 1e-9 * (1.0 + nu_oracle(n, c))) << n;
      ASSERT_EQ(seq.values[n], nu(n, c, *s));
    }
  }
  const auto c = make_context(*s, 50000, 40);
  EXPECT_THROW(nu(0, c, *s), Error);
  EXPECT_THROW(nu(c.Nb + 1, c, *s), Error);
  EXPECT_THROW(nu(1, c, build_sieve(100)), Error);
}

TEST(Nu, TotalComparableToLength) {
  const auto s = shared_sieve(1000000);
  const auto c = make_context(*s, 1000000, 100);
  const double ratio = nu_total(c, *s) / static_cast<double>(c.Nb);
  EXPECT_GT(ratio, 0.5);
  EXPECT_LT(ratio, 2.0);
}

TEST(Ab, MapAndRestrict) {
  const auto s = shared_sieve(1000000);
  ContextOptions o;
  o.w = 3.0;
  o.b = std::pair<u64, u64>{2, 5};
  const auto c = make_context(*s, 20000, 50, o);
  const auto A = random_subset(smooth_set(*s, 50, 20000).members, 0.5, 9);
  const auto Ab = map_to_Ab(A, c);
  std::vector<u64> oracle;
  const std::unordered_set<u64> inA(A.begin(), A.end());
  for (u64 n = 1; n <= c.Nb; ++n)
    if (inA.count(c.b1 * (c.W * n - c.b2))) oracle.push_back(n);
  EXPECT_EQ(Ab, oracle);

  const auto nu_b = nu_sequence(c, *s);
  const auto f = restrict_to(Ab, nu_b);
  for (u64 n = 1; n <= c.Nb; ++n) {
    const bool member = std::binary_search(Ab.begin(), Ab.end(), n);
    ASSERT_EQ(f.values[n], member ? nu_b.values[n] : 0.0);
    ASSERT_LE(f.values[n], nu_b.values[n]);
  }
  EXPECT_THROW(map_to_Ab(std::vector<u64>{20001}, c), Error);
}

TEST(Ab, ToCyclicWraps) {
  WeightedSequence s{5, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}};
  EXPECT_EQ(to_cyclic(s, 5), (std::vector<double>{5.0, 1.0, 2.0, 3.0, 4.0}));
  EXPECT_EQ(to_cyclic(s, 3), (std::vector<double>{3.0, 5.0, 7.0}));
}

TEST(Select, SmallestWSmooth) {
  EXPECT_EQ(smallest_w_smooth(2.0, 20, 100), (std::vector<u64>{1, 2, 4, 8, 16}));
  EXPECT_EQ(smallest_w_smooth(3.0, 20, 100), (std::vector<u64>{1, 2, 3, 4, 6, 8, 9, 12, 16, 18}));
  EXPECT_EQ(smallest_w_smooth(5.0, 100, 4), (std::vector<u64>{1, 2, 3, 4}));
}

TEST(Select, MatchesExhaustiveSearch) {
  const auto s = shared_sieve(1000000);
  const u64 N = 30000, y = 60;
  const auto A = random_subset(smooth_set(*s, y, N).members, 0.4, 21);
  for (double w : {2.0, 3.0, 5.0}) {
    SelectOptions so;
    so.w = w;
    so.b1_budget = 12;
    const auto sel = select_b(A, *s, N, y, so);

    ContextOptions co;
    co.w = w;
    const auto base = make_context(*s, N, y, co);
    double best = -1.0;
    u64 best_b1 = 0, best_b2 = 0;
    std::size_t scanned = 0;
    for (u64 b1 : smallest_w_smooth(w, 173, 12)) {
      for (u64 b2 = 1; b2 <= base.W; ++b2) {
        if (std::gcd(b2, base.W) != 1) continue;
        ++scanned;
        const auto c = rebase(base, b1, b2);
        const double mass = restrict_to(map_to_Ab(A, c), nu_sequence(c, *s)).total();
        if (mass > best * (1.0 + 1e-12) || best < 0.0) {
          best = mass;
          best_b1 = b1;
          best_b2 = b2;
        }
      }
    }
    EXPECT_EQ(sel.candidates, scanned);
    EXPECT_EQ(sel.ctx.b1, best_b1) << w;
    EXPECT_EQ(sel.ctx.b2, best_b2) << w;
    EXPECT_NEAR(sel.mass, best, 1e-9 * best);
    EXPECT_NEAR(sel.delta, static_cast<double>(A.size()) / smooth_set(*s, y, N).psi(), 1e-15);
  }
  EXPECT_THROW(select_b(std::vector<u64>{}, *s, N, y), Error);
}

TEST(Fourier, MaxNonzeroMode) {
  EXPECT_NEAR(max_nonzero_mode(std::vector<double>(64, 1.0)).value, 0.0, 1e-14);
  EXPECT_NEAR(max_nonzero_mode(std::vector<double>(97, 1.0)).value, 0.0, 1e-13);
  std::vector<double> spike(50, 0.0);
  spike[7] = 1.0;
  const auto peak = max_nonzero_mode(spike);
  EXPECT_NEAR(peak.value, 1.0 / 50.0, 1e-15);
  std::vector<double> wave(40);
  for (std::size_t n = 0; n < 40; ++n) wave[n] = 1.0 + std::cos(2 * std::numbers::pi * 3 * n / 40.0);
  const auto p3 = max_nonzero_mode(wave);
  EXPECT_TRUE(p3.a == 3 || p3.a == 37);
  EXPECT_NEAR(p3.value, 0.5, 1e-12);
}

TEST(Fourier, NuPeakMatchesDirectDft) {
  const auto s = shared_sieve(1000000);
  const auto c = make_context(*s, 3000, 30);
  const auto cyc = to_cyclic(nu_sequence(c, *s), c.Nb);
  double oracle = 0.0;
  for (u64 a = 1; a < c.Nb; ++a) {
    cplx acc{};
    for (u64 n = 0; n < c.Nb; ++n)
      acc += cyc[n] * fft::unit_root<double>(static_cast<i64>(a * n % c.Nb), c.Nb);
    oracle = std::max(oracle, std::abs(acc) / static_cast<double>(c.Nb));
  }
  EXPECT_NEAR(nu_fourier_max(c, *s).value, oracle, 1e-10);
}

TEST(Sigma, ClosedMatchesBrute) {
  for (auto [w, b2] : std::vector<std::pair<double, u64>>{{2.0, 1}, {3.0, 5}, {5.0, 7}, {7.0, 11}}) {
    ContextOptions o;
    o.w = w;
    o.alpha = 0.63;
    o.b = std::pair<u64, u64>{1, b2};
    const auto c = make_context(1000000, 100, o);
    for (u64 q = 1; q <= 120; ++q) {
      const auto gam = gamma_table(q, c);
      for (u64 a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        const cplx closed = sigma_aq_closed(static_cast<i64>(a), q, c);
        const cplx brute = sigma_aq_brute(static_cast<i64>(a), q, gam);
        ASSERT_LT(std::abs(closed - brute), 1e-9) << "w=" << w << " q=" << q << " a=" << a;
        ASSERT_LT(std::abs(sigma_aq_brute(static_cast<i64>(a), q, gam, fft::unit_roots<double>(q)) - brute),
                  1e-12);
      }
    }
  }
}

TEST(Sigma, Examples) {
  ContextOptions o;
  o.alpha = 0.5;
  const auto c = make_context(1000000, 100, o);
  EXPECT_NEAR(std::abs(sigma_aq_closed(1, 1, c) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(sigma_aq_closed(1, 4, c), cplx(0.0, 0.0));
  const double mag = (std::pow(3.0, -0.5) - 1.0 / 3.0) / (2.0 / 3.0);
  EXPECT_NEAR(std::abs(sigma_aq_closed(1, 3, c)), mag, 1e-14);
  EXPECT_THROW(sigma_aq_closed(3, 6, c), Error);
  EXPECT_THROW(sigma_aq_brute(1, 3, std::vector<double>(2)), Error);
}

TEST(Segment, MeasuredMassAndBounds) {
  const auto s = shared_sieve(1000000);
  const auto c = make_context(*s, 1000000, 100);
  const u64 q = 5, L = c.Nb / 10;
  const auto seg = segment_mass_audit(c, *s, 3, q, L);
  double direct = 0.0;
  for (u64 k = 0; k < L; ++k) direct += nu(3 + k * q, c, *s);
  EXPECT_NEAR(seg.measured, direct / c.Nb, 1e-12);
  EXPECT_NEAR(seg.predicted,
              static_cast<double>(L) / c.Nb * gamma_rq(3, q, c.W, static_cast<i64>(c.b2), c.alpha),
              1e-15);
  EXPECT_THROW(segment_mass_audit(c, *s, 3, q, c.Nb / 4), Error);
  EXPECT_THROW(segment_mass_audit(c, *s, 3, q, 10), Error);
}
