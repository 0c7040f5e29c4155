#pragma once

// Greatest-prime-factor sieve and the counting functions built on it:
// Psi(N, y), Psi(N, y; q, a), Psi_q(N, y), plus the binary sieve cache.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "smoothlab/arith.hpp"
#include "smoothlab/error.hpp"

namespace smoothlab {

struct SmoothSieve {
  u64 N = 0;
  std::vector<std::uint32_t> gpf;  // gpf[n] for 0 <= n <= N, gpf[0] = 0

  std::uint32_t operator[](u64 n) const { return gpf[n]; }
  bool is_smooth(u64 n, u64 y) const { return n >= 1 && n <= N && gpf[n] <= y; }
};

inline constexpr u64 default_sieve_budget_bytes = u64{1} << 30;

inline SmoothSieve build_sieve(u64 N, u64 budget_bytes = default_sieve_budget_bytes) {
  require(N >= 1, ErrorKind::invalid_argument, "build_sieve: N must be >= 1");
  if ((N + 1) * sizeof(std::uint32_t) > budget_bytes) {
    fail(ErrorKind::budget_exceeded,
         "build_sieve: N=" + std::to_string(N) + " needs " +
             std::to_string((N + 1) * sizeof(std::uint32_t)) +
             " bytes, budget is " + std::to_string(budget_bytes));
  }
  require(N < (u64{1} << 32), ErrorKind::budget_exceeded,
          "build_sieve: N must fit the 32-bit gpf encoding");

  SmoothSieve s;
  s.N = N;
  s.gpf.assign(N + 1, 0);
  s.gpf[1] = 1;
  // primes in increasing order overwrite, so the last writer is the largest
  for (u64 p = 2; p <= N; ++p) {
    if (s.gpf[p] != 0) continue;
    for (u64 m = p; m <= N; m += p) s.gpf[m] = static_cast<std::uint32_t>(p);
  }
  return s;
}

/// In-memory memo keyed by N; every module shares the same table.
inline std::shared_ptr<const SmoothSieve> shared_sieve(u64 N) {
  static detail::TableCache<SmoothSieve> cache;
  return cache.get(N, [](u64 n) { return build_sieve(n); });
}

// ---------------------------------------------------------------------------
// Cache file: "SMGPF1", N as u64 LE, then gpf[1..N] as u32 LE.
// ---------------------------------------------------------------------------

inline constexpr std::array<char, 6> sieve_magic{'S', 'M', 'G', 'P', 'F', '1'};

inline std::filesystem::path sieve_cache_path(const std::filesystem::path& dir,
                                              u64 N) {
  return dir / ("gpf_" + std::to_string(N) + ".bin");
}

inline void save_sieve(const SmoothSieve& sieve,
                       const std::filesystem::path& path) {
  std::vector<unsigned char> buf;
  buf.reserve(sieve_magic.size() + 8 + 4 * sieve.N);
  buf.insert(buf.end(), sieve_magic.begin(), sieve_magic.end());
  for (int b = 0; b < 8; ++b)
    buf.push_back(static_cast<unsigned char>((sieve.N >> (8 * b)) & 0xff));
  for (u64 n = 1; n <= sieve.N; ++n) {
    const std::uint32_t v = sieve.gpf[n];
    for (int b = 0; b < 4; ++b)
      buf.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xff));
  }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::io,
            "save_sieve: cannot open " + tmp.string());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    require(static_cast<bool>(out), ErrorKind::io,
            "save_sieve: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline SmoothSieve load_sieve(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io,
          "load_sieve: cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  require(buf.size() >= 14 &&
              std::memcmp(buf.data(), sieve_magic.data(), sieve_magic.size()) == 0,
          ErrorKind::format, "load_sieve: bad magic in " + path.string());
  u64 N = 0;
  for (int b = 0; b < 8; ++b) N |= u64{buf[6 + b]} << (8 * b);
  require(N >= 1 && buf.size() == 14 + 4 * N, ErrorKind::format,
          "load_sieve: length does not match N in " + path.string());

  SmoothSieve s;
  s.N = N;
  s.gpf.assign(N + 1, 0);
  const unsigned char* p = buf.data() + 14;
  for (u64 n = 1; n <= N; ++n, p += 4)
    s.gpf[n] = std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
               std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
  return s;
}

/// Loads gpf_<N>.bin from `dir` when present, otherwise builds and stores it.
inline SmoothSieve load_or_build_sieve(u64 N, const std::filesystem::path& dir,
                                       u64 budget_bytes = default_sieve_budget_bytes) {
  const auto path = sieve_cache_path(dir, N);
  if (std::filesystem::exists(path)) return load_sieve(path);
  SmoothSieve s = build_sieve(N, budget_bytes);
  save_sieve(s, path);
  return s;
}

// ---------------------------------------------------------------------------
// Smooth sets and counts
// ---------------------------------------------------------------------------

struct SmoothSet {
  u64 N = 0;
  u64 y = 0;
  std::vector<u64> members;  // ascending

  u64 psi() const { return members.size(); }
};

/// S(N, y) for N <= sieve.N.
inline SmoothSet smooth_set(const SmoothSieve& sieve, u64 y, u64 N) {
  require(y >= 2, ErrorKind::invalid_argument, "smooth_set: y must be >= 2");
  require(N <= sieve.N, ErrorKind::sieve_range,
          "smooth_set: N=" + std::to_string(N) + " exceeds sieve range " +
              std::to_string(sieve.N));
  SmoothSet set{N, y, {}};
  for (u64 n = 1; n <= N; ++n)
    if (sieve.gpf[n] <= y) set.members.push_back(n);
  return set;
}

inline SmoothSet smooth_set(const SmoothSieve& sieve, u64 y) {
  return smooth_set(sieve, y, sieve.N);
}

inline i64 residue(i64 a, u64 q) {
  const auto qq = static_cast<i64>(q);
  return ((a % qq) + qq) % qq;
}

/// counts[a] = Psi(N, y; q, a) for every a in [0, q).
inline std::vector<u64> psi_progression_table(const SmoothSet& set, u64 q) {
  require(q >= 1, ErrorKind::invalid_argument, "psi_progression: q must be >= 1");
  std::vector<u64> counts(q, 0);
  for (u64 m : set.members) ++counts[m % q];
  return counts;
}

inline u64 psi_progression(const SmoothSet& set, u64 q, i64 a) {
  require(q >= 1, ErrorKind::invalid_argument, "psi_progression: q must be >= 1");
  const auto r = static_cast<u64>(residue(a, q));
  return static_cast<u64>(std::count_if(set.members.begin(), set.members.end(),
                                        [&](u64 m) { return m % q == r; }));
}

inline u64 psi_coprime(const SmoothSet& set, u64 q) {
  require(q >= 1, ErrorKind::invalid_argument, "psi_coprime: q must be >= 1");
  return static_cast<u64>(std::count_if(set.members.begin(), set.members.end(),
                                        [&](u64 m) { return std::gcd(m, q) == 1; }));
}

/// max over (a, q) = 1 of |phi(q) Psi(N, y; q, a) / Psi_q(N, y) - 1|.
inline double granville_deviation(const SmoothSet& set, u64 q) {
  const auto counts = psi_progression_table(set, q);
  u64 coprime = 0;
  for (u64 a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) coprime += counts[a];
  require(coprime > 0, ErrorKind::invalid_argument,
          "granville_deviation: Psi_q is zero for q=" + std::to_string(q));
  const double phi = static_cast<double>(euler_phi(q));
  double worst = 0.0;
  for (u64 a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const double ratio = phi * static_cast<double>(counts[a]) /
                         static_cast<double>(coprime);
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return worst;
}

/// All w-smooth integers in [1, bound].
inline std::vector<u64> w_smooth_divisors(const SmoothSieve& sieve, u64 w,
                                          u64 bound) {
  require(bound <= sieve.N, ErrorKind::sieve_range,
          "w_smooth_divisors: bound exceeds sieve range");
  std::vector<u64> out;
  for (u64 n = 1; n <= bound; ++n)
    if (sieve.gpf[n] <= w) out.push_back(n);
  return out;
}

/// Rankin surrogate for the count of smooth numbers <= N carrying a
/// w-smooth divisor above sqrt(N):
///   N^(alpha/2 + eps) * prod_{p <= w} (1 - p^-(1 - alpha))^-1.
/// The product is the full sum over w-smooth b of b^-(1 - alpha).
inline double rankin_tail(u64 N, u64 w, double alpha, double eps = 0.0) {
  require(w >= 2, ErrorKind::invalid_argument, "rankin_tail: w must be >= 2");
  require(alpha < 1.0, ErrorKind::divergence,
          "rankin_tail: the sum over w-smooth b diverges for alpha >= 1");
  require(alpha > 0.0 && eps >= 0.0, ErrorKind::invalid_argument,
          "rankin_tail: need alpha > 0 and eps >= 0");
  double product = 1.0;
  for (u64 p : cached_primes(w)->primes)
    product /= 1.0 - std::pow(static_cast<double>(p), -(1.0 - alpha));
  return std::pow(static_cast<double>(N), alpha / 2.0 + eps) * product;
}

}  // namespace smoothlab
