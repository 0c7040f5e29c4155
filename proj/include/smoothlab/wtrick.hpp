#pragma once

// W-trick frame: the context (w, W, b1, b2, N_b, C_W), the weight nu_b,
// the transformed set A_b, pigeonhole selection of b, and the exact
// gamma / sigma formulas with their brute-force counterparts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smoothlab/arith.hpp"
#include "smoothlab/error.hpp"
#include "smoothlab/fft.hpp"
#include "smoothlab/fourier.hpp"
#include "smoothlab/saddle.hpp"
#include "smoothlab/smooth.hpp"

namespace smoothlab {

/// Which exponent the weight consumes. `empirical` is log Psi(N,y) / log N,
/// `saddle` is the root of the saddle-point equation at (N, y).
enum class AlphaSource { empirical, saddle };

struct ContextOptions {
  std::optional<double> w;                   // default: max(log3(N) / 2, 2)
  std::optional<std::pair<u64, u64>> b;      // (b1, b2); default (1, 1)
  AlphaSource alpha_source = AlphaSource::empirical;
  std::optional<double> alpha;               // explicit value, wins over the source
};

struct WContext {
  u64 N = 0;
  u64 y = 0;
  double w = 2.0;
  u64 W = 2;
  double alpha = 0.5;
  u64 b1 = 1;
  u64 b2 = 1;
  u64 Nb = 0;     // floor(N / (b1 W)) + 1
  double CW = 1.0;
};

inline double default_w(u64 N) {
  const double lll = std::log(std::log(std::log(static_cast<double>(N))));
  return std::max(0.5 * lll, 2.0);
}

namespace detail {

inline void check_b(u64 N, double w, u64 W, u64 b1, u64 b2) {
  require(b1 >= 1 && static_cast<double>(largest_prime_factor(b1)) <= w,
          ErrorKind::invalid_argument,
          "WContext: b1=" + std::to_string(b1) + " is not w-smooth");
  require(b1 * b1 <= N, ErrorKind::invalid_argument,
          "WContext: b1=" + std::to_string(b1) + " exceeds sqrt(N)");
  require(b2 >= 1 && b2 <= W && std::gcd(b2, W) == 1, ErrorKind::invalid_argument,
          "WContext: b2=" + std::to_string(b2) + " must lie in [1, W] coprime to W=" +
              std::to_string(W));
}

inline WContext assemble_context(u64 N, u64 y, double w, double alpha, u64 b1, u64 b2) {
  WContext c;
  c.N = N;
  c.y = y;
  c.w = w;
  c.W = primorial(w);
  c.alpha = alpha;
  check_b(N, w, c.W, b1, b2);
  c.b1 = b1;
  c.b2 = b2;
  c.Nb = N / (b1 * c.W) + 1;
  c.CW = c_w_constant(c.W, alpha).value;
  return c;
}

inline WContext make_context_impl(u64 N, u64 y, const ContextOptions& opts,
                                  const SmoothSieve* sieve) {
  require(N >= 100 && y >= 2, ErrorKind::invalid_argument,
          "make_context: need N >= 100 and y >= 2");
  const double w = opts.w.value_or(default_w(N));
  require(w >= 2.0, ErrorKind::invalid_argument, "make_context: w must be >= 2");

  double alpha = 0.0;
  if (opts.alpha) {
    alpha = *opts.alpha;
  } else if (opts.alpha_source == AlphaSource::saddle) {
    alpha = solve_alpha(static_cast<double>(N), y).alpha;
  } else {
    require(sieve != nullptr, ErrorKind::invalid_argument,
            "make_context: the empirical exponent needs a sieve");
    require(sieve->N >= N, ErrorKind::sieve_range, "make_context: sieve too small");
    u64 psi = 0;
    for (u64 n = 1; n <= N; ++n) psi += sieve->gpf[n] <= y;
    alpha = std::log(static_cast<double>(psi)) / std::log(static_cast<double>(N));
  }
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::invalid_argument,
          "make_context: alpha must lie in (0, 1), got " + std::to_string(alpha));

  const auto [b1, b2] = opts.b.value_or(std::pair<u64, u64>{1, 1});
  return assemble_context(N, y, w, alpha, b1, b2);
}

}  // namespace detail

inline WContext make_context(u64 N, u64 y, const ContextOptions& opts = {}) {
  return detail::make_context_impl(N, y, opts, nullptr);
}

inline WContext make_context(const SmoothSieve& sieve, u64 N, u64 y,
                             const ContextOptions& opts = {}) {
  return detail::make_context_impl(N, y, opts, &sieve);
}

/// Same frame and exponent, different b = (b1, b2).
inline WContext rebase(const WContext& ctx, u64 b1, u64 b2) {
  return detail::assemble_context(ctx.N, ctx.y, ctx.w, ctx.alpha, b1, b2);
}

namespace detail {

inline void check_sieve(const WContext& ctx, const SmoothSieve& sieve) {
  require(sieve.N >= ctx.N, ErrorKind::sieve_range,
          "nu: sieve covers " + std::to_string(sieve.N) + " < N=" + std::to_string(ctx.N));
}

// nu_b(n) without range checks; m = W n - b2.
inline double nu_unchecked(u64 n, const WContext& ctx, const SmoothSieve& sieve) {
  const u64 m = ctx.W * n - ctx.b2;
  if (m == 0) return 0.0;
  const u64 x = ctx.b1 * m;
  if (x > ctx.N || sieve.gpf[x] > ctx.y) return 0.0;
  return ctx.CW * std::pow(static_cast<double>(m), 1.0 - ctx.alpha) / ctx.alpha;
}

}  // namespace detail

inline double nu(u64 n, const WContext& ctx, const SmoothSieve& sieve) {
  detail::check_sieve(ctx, sieve);
  require(n >= 1 && n <= ctx.Nb, ErrorKind::invalid_argument,
          "nu: n=" + std::to_string(n) + " outside [1, N_b]");
  return detail::nu_unchecked(n, ctx, sieve);
}

/// Nonnegative weights indexed n = 1..length; values[0] is an unused zero slot.
struct WeightedSequence {
  u64 length = 0;
  std::vector<double> values;

  double total() const { return std::accumulate(values.begin(), values.end(), 0.0); }
};

inline WeightedSequence nu_sequence(const WContext& ctx, const SmoothSieve& sieve) {
  detail::check_sieve(ctx, sieve);
  WeightedSequence s{ctx.Nb, std::vector<double>(ctx.Nb + 1, 0.0)};
  for (u64 n = 1; n <= ctx.Nb; ++n) s.values[n] = detail::nu_unchecked(n, ctx, sieve);
  return s;
}

inline double nu_total(const WContext& ctx, const SmoothSieve& sieve) {
  return nu_sequence(ctx, sieve).total();
}

/// A_b = { n : b1 (W n - b2) in A }, ascending.
inline std::vector<u64> map_to_Ab(std::span<const u64> A, const WContext& ctx) {
  std::vector<u64> out;
  for (u64 x : A) {
    require(x >= 1 && x <= ctx.N, ErrorKind::invalid_argument,
            "map_to_Ab: element " + std::to_string(x) + " outside [1, N]");
    if (x % ctx.b1 != 0) continue;
    const u64 m = x / ctx.b1;
    if ((m + ctx.b2) % ctx.W != 0) continue;
    out.push_back((m + ctx.b2) / ctx.W);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// f_b = 1_{A_b} nu_b on [1, N_b].
inline WeightedSequence restrict_to(std::span<const u64> Ab, const WeightedSequence& weights) {
  WeightedSequence f{weights.length, std::vector<double>(weights.values.size(), 0.0)};
  for (u64 n : Ab)
    if (n >= 1 && n <= weights.length) f.values[n] = weights.values[n];
  return f;
}

/// Places a sequence on Z/M Z: slot n mod M receives values[n].
inline std::vector<double> to_cyclic(const WeightedSequence& s, u64 M) {
  require(M >= 1, ErrorKind::invalid_argument, "to_cyclic: M must be >= 1");
  std::vector<double> c(M, 0.0);
  for (u64 n = 1; n <= s.length; ++n) c[n % M] += s.values[n];
  return c;
}

// ---------------------------------------------------------------------------
// Pigeonhole selection of b
// ---------------------------------------------------------------------------

struct SelectOptions {
  std::optional<double> w;
  AlphaSource alpha_source = AlphaSource::empirical;
  std::optional<double> alpha;
  std::size_t b1_budget = 64;
  // elements of A_b below discard_fraction * N_b are dropped in the
  // post-selection report; defaults to the measured density delta
  std::optional<double> discard_fraction;
};

struct Selection {
  WContext ctx;
  double mass = 0.0;                 // sum_n 1_{A_b}(n) nu_b(n)
  std::size_t b1_candidates = 0;
  std::size_t candidates = 0;        // (b1, b2) pairs scanned
  double delta = 0.0;                // |A| / Psi(N, y)
  std::size_t Ab_size = 0;
  double discard_threshold = 0.0;    // absolute cut-off on n
  std::size_t Ab_kept = 0;
  double kept_mass = 0.0;
  bool linear_threshold_held = false;  // Ab_kept > (delta/2) N_b
  bool power_threshold_held = false;   // Ab_kept > (delta/2) N_b^alpha
  double mass_ratio = 0.0;             // mass / (delta^(2-alpha) N_b)
};

/// w-smooth integers <= bound, ascending, at most `limit` of them.
inline std::vector<u64> smallest_w_smooth(double w, u64 bound, std::size_t limit) {
  std::vector<u64> out{1};
  for (u64 p : cached_primes(static_cast<u64>(std::floor(w)))->primes) {
    const std::size_t existing = out.size();
    for (std::size_t k = 0; k < existing; ++k) {
      for (u64 v = out[k] * p; v <= bound; v *= p) {
        out.push_back(v);
        if (v > bound / p) break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  if (out.size() > limit) out.resize(limit);
  return out;
}

inline Selection select_b(std::span<const u64> A, const SmoothSieve& sieve, u64 N, u64 y,
                          const SelectOptions& opts = {}) {
  require(!A.empty(), ErrorKind::empty_candidates, "select_b: A is empty");
  require(sieve.N >= N, ErrorKind::sieve_range, "select_b: sieve too small");
  require(opts.b1_budget >= 1, ErrorKind::invalid_argument,
          "select_b: b1 budget must be >= 1");

  ContextOptions copts;
  copts.w = opts.w;
  copts.alpha_source = opts.alpha_source;
  copts.alpha = opts.alpha;
  const WContext base = make_context(sieve, N, y, copts);
  const u64 W = base.W;

  u64 root = static_cast<u64>(std::sqrt(static_cast<double>(N)));
  while (root * root > N) --root;
  while ((root + 1) * (root + 1) <= N) ++root;
  const auto b1s = smallest_w_smooth(base.w, root, opts.b1_budget);
  std::vector<u64> b2s;
  for (u64 b2 = 1; b2 <= W; ++b2)
    if (std::gcd(b2, W) == 1) b2s.push_back(b2);
  require(!b1s.empty() && !b2s.empty(), ErrorKind::empty_candidates,
          "select_b: no admissible (b1, b2)");

  // mass[i][k] for b1s[i], b2s[k]; nu_b depends on b only through m = x / b1
  std::vector<std::vector<double>> mass(b1s.size(), std::vector<double>(W + 1, 0.0));
  u64 smooth_members = 0;
  for (u64 x : A) {
    require(x >= 1 && x <= N, ErrorKind::invalid_argument,
            "select_b: element " + std::to_string(x) + " outside [1, N]");
    if (sieve.gpf[x] > y) continue;
    ++smooth_members;
    for (std::size_t i = 0; i < b1s.size(); ++i) {
      if (x % b1s[i] != 0) continue;
      const u64 m = x / b1s[i];
      if (std::gcd(m, W) != 1) continue;
      const u64 b2 = (W - m % W) % W == 0 ? W : (W - m % W) % W;
      mass[i][b2] += base.CW * std::pow(static_cast<double>(m), 1.0 - base.alpha) / base.alpha;
    }
  }

  Selection sel;
  sel.b1_candidates = b1s.size();
  sel.candidates = b1s.size() * b2s.size();
  std::size_t best_i = 0;
  u64 best_b2 = b2s.front();
  double best = -1.0;
  for (std::size_t i = 0; i < b1s.size(); ++i) {
    for (u64 b2 : b2s) {
      if (mass[i][b2] > best) {
        best = mass[i][b2];
        best_i = i;
        best_b2 = b2;
      }
    }
  }

  sel.ctx = rebase(base, b1s[best_i], best_b2);
  sel.mass = best;

  u64 psi = 0;
  for (u64 n = 1; n <= N; ++n) psi += sieve.gpf[n] <= y;
  sel.delta = static_cast<double>(smooth_members) / static_cast<double>(psi);

  const auto Ab = map_to_Ab(A, sel.ctx);
  sel.Ab_size = Ab.size();
  const double nb = static_cast<double>(sel.ctx.Nb);
  sel.discard_threshold = opts.discard_fraction.value_or(sel.delta) * nb;
  for (u64 n : Ab) {
    if (static_cast<double>(n) < sel.discard_threshold) continue;
    ++sel.Ab_kept;
    sel.kept_mass += detail::nu_unchecked(n, sel.ctx, sieve);
  }
  const double kept = static_cast<double>(sel.Ab_kept);
  sel.linear_threshold_held = kept > sel.delta / 2.0 * nb;
  sel.power_threshold_held = kept > sel.delta / 2.0 * std::pow(nb, sel.ctx.alpha);
  sel.mass_ratio = sel.mass / (std::pow(sel.delta, 2.0 - sel.ctx.alpha) * nb);
  return sel;
}

// ---------------------------------------------------------------------------
// Fourier behaviour of nu_b and the exact sigma formula
// ---------------------------------------------------------------------------

struct FourierPeak {
  u64 a = 0;
  double value = 0.0;
};

/// max over a != 0 of |(1/M) sum_{n in Z/M} c(n) e(a n / M)|, M = c.size().
inline FourierPeak max_nonzero_mode(std::span<const double> cyc) {
  const std::size_t M = cyc.size();
  FourierPeak peak;
  if (M < 2) return peak;
  const auto spec = fft::transform_real<double, double>(cyc, M, +1);
  const double scale = 1.0 / static_cast<double>(M);
  for (std::size_t a = 1; a < M; ++a) {
    const double v = std::abs(spec[a]) * scale;
    if (v > peak.value) peak = {a, v};
  }
  return peak;
}

/// The largest nonzero Fourier mode of nu_b on Z/N_b Z.
inline FourierPeak nu_fourier_max(const WContext& ctx, const SmoothSieve& sieve) {
  const auto cyc = to_cyclic(nu_sequence(ctx, sieve), ctx.Nb);
  return max_nonzero_mode(cyc);
}

/// e(a b2 W^-1 / q) prod_{p | q} (p^-alpha - p^-1) / (1 - p^-1) when
/// gcd(q, W) = 1, and 0 otherwise.
inline cplx sigma_aq_closed(i64 a, u64 q, const WContext& ctx) {
  require(q >= 1, ErrorKind::invalid_argument, "sigma_aq_closed: q must be >= 1");
  require(std::gcd(static_cast<u64>(residue(a, q)), q) == 1, ErrorKind::invalid_argument,
          "sigma_aq_closed: gcd(a, q) must be 1");
  if (std::gcd(q, ctx.W) != 1) return {0.0, 0.0};
  const u64 w_inv = mod_inverse(static_cast<i64>(ctx.W), q);
  const auto phase = static_cast<i64>(
      (static_cast<unsigned __int128>(residue(a, q)) * (ctx.b2 % q) % q * w_inv) % q);
  double product = 1.0;
  for (u64 p : distinct_prime_factors(q)) {
    const double pd = static_cast<double>(p);
    product *= (std::pow(pd, -ctx.alpha) - 1.0 / pd) / (1.0 - 1.0 / pd);
  }
  return fft::unit_root<double>(phase, q) * product;
}

/// gamma_{r,q} for r = 0..q-1 under the context's W, b2 and alpha.
inline std::vector<double> gamma_table(u64 q, const WContext& ctx) {
  std::vector<double> g(q);
  for (u64 r = 0; r < q; ++r)
    g[r] = gamma_rq(static_cast<i64>(r), q, ctx.W, static_cast<i64>(ctx.b2), ctx.alpha);
  return g;
}

/// sum_{r mod q} e(a r / q) gamma_{r,q}, reusing a precomputed gamma table.
inline cplx sigma_aq_brute(i64 a, u64 q, std::span<const double> gammas) {
  require(q >= 1 && gammas.size() == q, ErrorKind::invalid_argument,
          "sigma_aq_brute: gamma table must have q entries");
  require(std::gcd(static_cast<u64>(residue(a, q)), q) == 1, ErrorKind::invalid_argument,
          "sigma_aq_brute: gcd(a, q) must be 1");
  const auto ar = static_cast<u64>(residue(a, q));
  cplx acc{};
  for (u64 r = 0; r < q; ++r)
    acc += fft::unit_root<double>(static_cast<i64>(ar * r % q), q) * gammas[r];
  return acc;
}

/// As above with e(k / q) read from a table of q roots.
inline cplx sigma_aq_brute(i64 a, u64 q, std::span<const double> gammas,
                           std::span<const cplx> roots) {
  require(q >= 1 && gammas.size() == q && roots.size() == q, ErrorKind::invalid_argument,
          "sigma_aq_brute: gamma and root tables must have q entries");
  require(std::gcd(static_cast<u64>(residue(a, q)), q) == 1, ErrorKind::invalid_argument,
          "sigma_aq_brute: gcd(a, q) must be 1");
  const auto ar = static_cast<u64>(residue(a, q));
  cplx acc{};
  for (u64 r = 0; r < q; ++r) acc += roots[ar * r % q] * gammas[r];
  return acc;
}

inline cplx sigma_aq_brute(i64 a, u64 q, const WContext& ctx) {
  const auto g = gamma_table(q, ctx);
  return sigma_aq_brute(a, q, g);
}

struct SegmentMass {
  double measured = 0.0;   // sum_{n in X} nu_b(n) / N_b
  double predicted = 0.0;  // (L / N_b) gamma_{r,q}
};

/// X = {r, r + q, ..., r + (L - 1) q} must sit inside [1, N_b] and have
/// L >= N_b / log^A N_b.
inline SegmentMass segment_mass_audit(const WContext& ctx, const SmoothSieve& sieve, u64 r,
                                      u64 q, u64 L, double log_power = 2.0) {
  detail::check_sieve(ctx, sieve);
  require(q >= 1 && L >= 1 && r >= 1, ErrorKind::invalid_argument,
          "segment_mass_audit: need r, q, L >= 1");
  require(r + (L - 1) * q <= ctx.Nb, ErrorKind::invalid_argument,
          "segment_mass_audit: progression leaves [1, N_b]");
  const double nb = static_cast<double>(ctx.Nb);
  require(static_cast<double>(L) >= nb / std::pow(std::log(nb), log_power),
          ErrorKind::invalid_argument, "segment_mass_audit: L too short for the configured A");
  SegmentMass out;
  for (u64 k = 0; k < L; ++k) out.measured += detail::nu_unchecked(r + k * q, ctx, sieve);
  out.measured /= nb;
  out.predicted = static_cast<double>(L) / nb *
                  gamma_rq(static_cast<i64>(r), q, ctx.W, static_cast<i64>(ctx.b2), ctx.alpha);
  return out;
}

}  // namespace smoothlab
