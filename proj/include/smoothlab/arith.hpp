#pragma once

// Elementary multiplicative number theory: prime tables, mu / phi / omega
// tables, Ramanujan sums and modular inverses.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smoothlab/error.hpp"
#include "smoothlab/fft.hpp"

namespace smoothlab {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimeTable {
  u64 limit = 0;
  std::vector<u64> primes;  // ascending, all primes <= limit
};

inline PrimeTable primes_upto(u64 limit) {
  PrimeTable table{limit, {}};
  if (limit < 2) return table;
  std::vector<bool> composite(limit + 1, false);
  for (u64 p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    table.primes.push_back(p);
    for (u64 m = p * p; m <= limit; m += p) composite[m] = true;
  }
  return table;
}

struct MultiplicativeTables {
  u64 limit = 0;
  // indexed by n in [0, limit]; slot 0 is unused and holds zeros
  std::vector<int> mobius;
  std::vector<u64> phi;
  std::vector<int> omega;
};

// Linear sieve: every composite is struck exactly once by its least prime.
inline MultiplicativeTables multiplicative_tables(u64 limit) {
  require(limit >= 1, ErrorKind::invalid_argument,
          "multiplicative_tables: limit must be >= 1");
  MultiplicativeTables t;
  t.limit = limit;
  t.mobius.assign(limit + 1, 0);
  t.phi.assign(limit + 1, 0);
  t.omega.assign(limit + 1, 0);
  t.mobius[1] = 1;
  t.phi[1] = 1;

  std::vector<u64> primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 n = 2; n <= limit; ++n) {
    if (!composite[n]) {
      primes.push_back(n);
      t.mobius[n] = -1;
      t.phi[n] = n - 1;
      t.omega[n] = 1;
    }
    for (u64 p : primes) {
      const u64 m = n * p;
      if (m > limit) break;
      composite[m] = true;
      if (n % p == 0) {
        t.mobius[m] = 0;
        t.phi[m] = t.phi[n] * p;
        t.omega[m] = t.omega[n];
        break;
      }
      t.mobius[m] = -t.mobius[n];
      t.phi[m] = t.phi[n] * (p - 1);
      t.omega[m] = t.omega[n] + 1;
    }
  }
  return t;
}

namespace detail {

template <typename T>
class TableCache {
 public:
  template <typename Build>
  std::shared_ptr<const T> get(u64 key, Build build) {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto made = std::make_shared<const T>(build(key));
    cache_.emplace(key, made);
    return made;
  }

 private:
  std::mutex mutex_;
  std::map<u64, std::shared_ptr<const T>> cache_;
};

}  // namespace detail

/// Process-wide memo of prime tables, one per limit.
inline std::shared_ptr<const PrimeTable> cached_primes(u64 limit) {
  static detail::TableCache<PrimeTable> cache;
  return cache.get(limit, primes_upto);
}

inline std::shared_ptr<const MultiplicativeTables> cached_multiplicative_tables(
    u64 limit) {
  static detail::TableCache<MultiplicativeTables> cache;
  return cache.get(limit, multiplicative_tables);
}

/// Trial-division factorisation into (prime, exponent) pairs, ascending.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (auto [p, e] : factorize(n)) out.push_back(p);
  return out;
}

/// P(n), the greatest prime factor, with P(1) = 1.
inline u64 largest_prime_factor(u64 n) {
  auto f = factorize(n);
  return f.empty() ? 1 : f.back().first;
}

inline u64 euler_phi(u64 n) {
  u64 result = n;
  for (auto [p, e] : factorize(n)) result = result / p * (p - 1);
  return result;
}

inline int mobius(u64 n) {
  int sign = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline u64 next_prime(u64 n) {
  while (!is_prime(n)) ++n;
  return n;
}

/// Product of all primes <= w (1 when w < 2).
inline u64 primorial(double w) {
  u64 product = 1;
  for (u64 p = 2; static_cast<double>(p) <= w; ++p)
    if (is_prime(p)) product *= p;
  return product;
}

/// c_q(a) from the closed form mu(q/g) * phi(q) / phi(q/g), g = gcd(a, q).
inline double ramanujan_sum(u64 q, i64 a) {
  require(q >= 1, ErrorKind::invalid_argument, "ramanujan_sum: q must be >= 1");
  const u64 g = std::gcd(static_cast<u64>(a < 0 ? -a : a), q);
  const u64 r = q / g;  // gcd(0, q) = q handles a = 0
  return static_cast<double>(mobius(r)) * static_cast<double>(euler_phi(q)) /
         static_cast<double>(euler_phi(r));
}

/// Direct sum of e(a t / q) over 1 <= t <= q with gcd(t, q) = 1.
inline std::complex<double> ramanujan_sum_bruteforce(u64 q, i64 a) {
  require(q >= 1, ErrorKind::invalid_argument,
          "ramanujan_sum_bruteforce: q must be >= 1");
  const auto qq = static_cast<i64>(q);
  const i64 ar = ((a % qq) + qq) % qq;
  std::complex<double> acc{};
  for (u64 t = 1; t <= q; ++t) {
    if (std::gcd(t, q) != 1) continue;
    acc += fft::unit_root<double>(
        static_cast<i64>((static_cast<unsigned __int128>(ar) * t) % q), q);
  }
  return acc;
}

/// Same sum, reading e(k / q) from a precomputed table of q roots.
inline std::complex<double> ramanujan_sum_bruteforce(
    u64 q, i64 a, std::span<const std::complex<double>> roots) {
  require(q >= 1 && roots.size() == q, ErrorKind::invalid_argument,
          "ramanujan_sum_bruteforce: root table must have q entries");
  const auto qq = static_cast<i64>(q);
  const auto ar = static_cast<u64>(((a % qq) + qq) % qq);
  std::complex<double> acc{};
  for (u64 t = 1; t <= q; ++t)
    if (std::gcd(t, q) == 1) acc += roots[ar * t % q];
  return acc;
}

/// Inverse of a modulo q in [0, q).
inline u64 mod_inverse(i64 a, u64 q) {
  require(q >= 1, ErrorKind::invalid_argument, "mod_inverse: q must be >= 1");
  const auto qq = static_cast<i64>(q);
  i64 r0 = ((a % qq) + qq) % qq, r1 = qq;
  i64 s0 = 1, s1 = 0;
  while (r1 != 0) {
    const i64 k = r0 / r1;
    r0 = std::exchange(r1, r0 - k * r1);
    s0 = std::exchange(s1, s0 - k * s1);
  }
  if (r0 != 1 && q != 1) {
    fail(ErrorKind::not_invertible,
         "mod_inverse: gcd(" + std::to_string(a) + ", " + std::to_string(q) +
             ") = " + std::to_string(r0));
  }
  return static_cast<u64>(((s0 % qq) + qq) % qq);
}

}  // namespace smoothlab
