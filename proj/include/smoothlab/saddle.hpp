#pragma once

// Saddle point alpha(x, y) of the y-smooth numbers up to x and the
// multiplicative correction factors built from an exponent alpha.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "smoothlab/arith.hpp"
#include "smoothlab/error.hpp"
#include "smoothlab/smooth.hpp"

namespace smoothlab {

struct SaddlePoint {
  double x = 0.0;
  u64 y = 0;
  double alpha = 0.0;
  double residual = 0.0;  // value of the saddle equation at alpha
};

/// sum_{p <= y} log p / (p^alpha - 1) - log x; strictly decreasing in alpha.
inline double saddle_residual(double alpha, double x, u64 y) {
  double sum = 0.0;
  for (u64 p : cached_primes(y)->primes) {
    const double lp = std::log(static_cast<double>(p));
    sum += lp / std::expm1(alpha * lp);
  }
  return sum - std::log(x);
}

inline constexpr double default_saddle_tol = 1e-10;

/// Bisection on (0, 2] for sum_{p <= y} log p / (p^alpha - 1) = log x.
inline SaddlePoint solve_alpha(double x, u64 y, double tol = default_saddle_tol) {
  require(x >= 2.0 && y >= 2, ErrorKind::invalid_argument,
          "solve_alpha: need x >= 2 and y >= 2");
  require(tol > 0.0, ErrorKind::invalid_argument, "solve_alpha: tol must be > 0");

  // the residual tends to +inf as alpha -> 0+, so only the right end is checked
  double lo = 0.0, hi = 2.0;
  const double f_hi = saddle_residual(hi, x, y);
  if (f_hi > 0.0) {
    fail(ErrorKind::no_sign_change,
         "solve_alpha: no sign change on (0, 2] for x=" + std::to_string(x) +
             ", y=" + std::to_string(y));
  }
  if (std::abs(f_hi) <= tol) return {x, y, hi, f_hi};

  double mid = 1.0, f_mid = saddle_residual(mid, x, y);
  for (int iter = 0; iter < 200 && std::abs(f_mid) > tol; ++iter) {
    if (f_mid > 0.0) lo = mid;
    else hi = mid;
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;  // bracket exhausted at double precision
    mid = next;
    f_mid = saddle_residual(mid, x, y);
  }
  return {x, y, mid, f_mid};
}

/// log Psi(N, y) / log N, the exponent in Psi(N, y) = N^alpha.
inline double alpha_empirical(const SmoothSet& set) {
  require(set.N >= 2, ErrorKind::invalid_argument, "alpha_empirical: need N >= 2");
  require(set.psi() >= 1, ErrorKind::invalid_argument,
          "alpha_empirical: empty smooth set");
  return std::log(static_cast<double>(set.psi())) /
         std::log(static_cast<double>(set.N));
}

/// g_q(s) = prod_{p | q} (1 - p^-s).
inline double g_q(u64 q, double s) {
  require(q >= 1 && s > 0.0, ErrorKind::invalid_argument,
          "g_q: need q >= 1 and s > 0");
  double product = 1.0;
  for (u64 p : distinct_prime_factors(q))
    product *= 1.0 - std::pow(static_cast<double>(p), -s);
  return product;
}

/// Psi_q(N, y) / (g_q(alpha) Psi(N, y)); q must be y-smooth.
inline double bt_ratio(const SmoothSet& set, u64 q, double alpha) {
  require(q >= 1, ErrorKind::invalid_argument, "bt_ratio: q must be >= 1");
  if (largest_prime_factor(q) > set.y) {
    fail(ErrorKind::invalid_argument,
         "bt_ratio: q=" + std::to_string(q) + " is not " +
             std::to_string(set.y) + "-smooth");
  }
  require(set.psi() > 0, ErrorKind::invalid_argument, "bt_ratio: Psi is zero");
  return static_cast<double>(psi_coprime(set, q)) /
         (g_q(q, alpha) * static_cast<double>(set.psi()));
}

struct CwConstant {
  double value = 1.0;  // prod_{p | W} (1 - 1/p) / (1 - p^-alpha)
  // exp(w^(1-alpha) / log w) / log w with w = P(W); absent for W = 1
  std::optional<double> growth_comparison;
};

inline CwConstant c_w_constant(u64 W, double alpha) {
  require(W >= 1 && mobius(W) != 0, ErrorKind::invalid_argument,
          "c_w_constant: W must be squarefree and >= 1");
  require(alpha > 0.0, ErrorKind::invalid_argument,
          "c_w_constant: alpha must be > 0");
  CwConstant c;
  for (u64 p : distinct_prime_factors(W)) {
    const double pd = static_cast<double>(p);
    c.value *= (1.0 - 1.0 / pd) / (1.0 - std::pow(pd, -alpha));
  }
  if (W > 1) {
    const double w = static_cast<double>(largest_prime_factor(W));
    c.growth_comparison = std::exp(std::pow(w, 1.0 - alpha) / std::log(w)) / std::log(w);
  }
  return c;
}

/// gamma_{r,q} = prod_{p | W} (1-1/p)/(1-p^-alpha) * prod_{p | Wq/d} (1-p^-alpha)/(1-1/p)
/// with d = gcd(-b2 + W r, W q). Primes dividing both W and Wq/d cancel and
/// are skipped, so the value is exactly 1 when nothing survives.
inline double gamma_rq(i64 r, u64 q, u64 W, i64 b2, double alpha) {
  require(q >= 1 && W >= 1, ErrorKind::invalid_argument,
          "gamma_rq: need q >= 1 and W >= 1");
  require(std::gcd(static_cast<u64>(b2 < 0 ? -b2 : b2), W) == 1,
          ErrorKind::invalid_argument, "gamma_rq: gcd(b2, W) must be 1");
  const u64 Wq = W * q;
  const i64 t = -b2 + static_cast<i64>(W) * r;
  const u64 d = std::gcd(static_cast<u64>(t < 0 ? -t : t), Wq);
  const u64 rest = Wq / d;

  double value = 1.0;
  for (u64 p : distinct_prime_factors(W)) {
    if (rest % p == 0) continue;
    const double pd = static_cast<double>(p);
    value *= (1.0 - 1.0 / pd) / (1.0 - std::pow(pd, -alpha));
  }
  for (u64 p : distinct_prime_factors(rest)) {
    if (W % p == 0) continue;
    const double pd = static_cast<double>(p);
    value *= (1.0 - std::pow(pd, -alpha)) / (1.0 - 1.0 / pd);
  }
  return value;
}

}  // namespace smoothlab
