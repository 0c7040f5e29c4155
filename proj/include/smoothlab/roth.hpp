#pragma once

// Three-term progressions: brute-force and spectral counts, the weighted
// trilinear form, the transference-hypothesis audit and the end-to-end
// W-trick search with pullback.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "smoothlab/arith.hpp"
#include "smoothlab/error.hpp"
#include "smoothlab/fft.hpp"
#include "smoothlab/parallel.hpp"
#include "smoothlab/wtrick.hpp"

namespace smoothlab {

struct PullBack {
  i64 x0 = 0;  // b1 (W n - b2)
  i64 D = 0;   // b1 W d
};

struct APWitness {
  i64 n = 0;
  i64 d = 0;
  std::array<i64, 3> triple{};
  std::optional<PullBack> pulled_back;
};

inline APWitness make_witness(i64 n, i64 d) { return {n, d, {n, n + d, n + 2 * d}, std::nullopt}; }

struct BruteCount {
  u64 count = 0;
  std::vector<APWitness> witnesses;  // first few in (n, d) lexicographic order
};

/// Counts (n, n+d, n+2d) inside `points` with d > 0.
inline BruteCount count_3aps_brute(std::span<const u64> points, std::size_t max_witnesses = 16,
                                   unsigned threads = 1) {
  std::vector<u64> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {};

  const u64 lo = pts.front(), hi = pts.back();
  std::vector<std::uint8_t> member(hi - lo + 1, 0);
  for (u64 v : pts) member[v - lo] = 1;

  auto chunk = [&](std::size_t begin, std::size_t end) {
    BruteCount part;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const u64 z = 2 * pts[j] - pts[i];
        if (z > hi) break;
        if (!member[z - lo]) continue;
        ++part.count;
        if (part.witnesses.size() < max_witnesses)
          part.witnesses.push_back(make_witness(static_cast<i64>(pts[i]),
                                                static_cast<i64>(pts[j] - pts[i])));
      }
    }
    return part;
  };
  auto combine = [&](BruteCount acc, BruteCount part) {
    acc.count += part.count;
    for (auto& w : part.witnesses)
      if (acc.witnesses.size() < max_witnesses) acc.witnesses.push_back(w);
    return acc;
  };
  return parallel_reduce<BruteCount>(0, pts.size(), threads, BruteCount{}, chunk, combine);
}

/// sum_{n, d in Z/MZ} 1_P(n) 1_P(n+d) 1_P(n+2d), d = 0 included, before rounding.
inline long double spectral_ap_sum(std::span<const u64> points, std::size_t M) {
  std::vector<long double> f(M, 0.0L);
  for (u64 v : points) {
    require(v < M, ErrorKind::aliasing, "spectral_ap_sum: point exceeds the cyclic length");
    f[v] = 1.0L;
  }
  const auto F = fft::transform_real<long double, long double>(std::span<const long double>(f), M, +1);
  std::complex<long double> acc{};
  for (std::size_t a = 0; a < M; ++a) {
    const std::size_t minus_two_a = (M - (2 * a) % M) % M;
    acc += F[a] * F[a] * F[minus_two_a];
  }
  return acc.real() / static_cast<long double>(M);
}

/// Ordered (n, d), d != 0, count on Z/MZ; equals twice the brute count once
/// M >= 2 max + 1 rules out wraparound.
inline u64 count_3aps_spectral(std::span<const u64> points, std::size_t M) {
  std::vector<u64> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return 0;
  if (M < 2 * pts.back() + 1) {
    fail(ErrorKind::aliasing, "count_3aps_spectral: M=" + std::to_string(M) +
                                  " below wraparound bound " + std::to_string(2 * pts.back() + 1));
  }
  const long double total = spectral_ap_sum(pts, M);
  const auto rounded = static_cast<i64>(std::llround(total));
  // the d = 0 term contributes exactly |points|
  return static_cast<u64>(rounded - static_cast<i64>(pts.size()));
}

/// (1/M^2) sum_{n, d in Z/MZ} f(n) g(n + d) h(n + 2d).
inline double trilinear_form(std::span<const double> f, std::span<const double> g,
                             std::span<const double> h) {
  require(f.size() == g.size() && g.size() == h.size() && !f.empty(),
          ErrorKind::length_mismatch, "trilinear_form: sequences must share a nonzero length");
  const std::size_t M = f.size();
  const auto F = fft::transform_real<long double, double>(f, M, +1);
  const auto G = fft::transform_real<long double, double>(g, M, +1);
  const auto H = fft::transform_real<long double, double>(h, M, +1);
  std::complex<long double> acc{};
  for (std::size_t a = 0; a < M; ++a) acc += F[a] * G[(M - (2 * a) % M) % M] * H[a];
  const long double m = static_cast<long double>(M);
  return static_cast<double>(acc.real() / (m * m * m));
}

struct TransferenceReport {
  std::size_t M = 0;
  double delta = 0.0;     // (1/M) sum f
  double eta = 0.0;       // max_{a != 0} |(1/M) sum nu(n) e(a n / M)|
  double eta_zero = 0.0;  // |(1/M) sum nu - 1|
  double p = 0.0;
  double Mp = 0.0;        // sum_a |(1/M) sum f(n) e(a n / M)|^p
  double trilinear = 0.0; // trilinear_form(f, f, f)
  std::optional<double> moment_comparison;  // W^(p (1 - alpha))
};

inline TransferenceReport transference_audit(std::span<const double> f, std::span<const double> nu,
                                             double p,
                                             const std::optional<WContext>& ctx = std::nullopt) {
  require(f.size() == nu.size() && !f.empty(), ErrorKind::length_mismatch,
          "transference_audit: f and nu must share a nonzero length");
  require(p > 2.0 && p < 3.0, ErrorKind::invalid_argument,
          "transference_audit: p must lie in (2, 3)");
  for (std::size_t n = 0; n < f.size(); ++n) {
    require(f[n] >= 0.0 && nu[n] >= 0.0, ErrorKind::invalid_argument,
            "transference_audit: negative value at index " + std::to_string(n));
    if (f[n] > nu[n]) {
      fail(ErrorKind::majorization, "transference_audit: f > nu at index " + std::to_string(n));
    }
  }
  const std::size_t M = f.size();
  const double m = static_cast<double>(M);
  TransferenceReport rep;
  rep.M = M;
  rep.p = p;

  const auto F = fft::transform_real<double, double>(f, M, +1);
  const auto V = fft::transform_real<double, double>(nu, M, +1);
  rep.delta = F[0].real() / m;
  rep.eta_zero = std::abs(V[0].real() / m - 1.0);
  for (std::size_t a = 1; a < M; ++a) rep.eta = std::max(rep.eta, std::abs(V[a]) / m);
  for (std::size_t a = 0; a < M; ++a) rep.Mp += std::pow(std::abs(F[a]) / m, p);
  rep.trilinear = trilinear_form(f, f, f);
  if (ctx) rep.moment_comparison = std::pow(static_cast<double>(ctx->W), p * (1.0 - ctx->alpha));
  return rep;
}

// ---------------------------------------------------------------------------
// End-to-end search
// ---------------------------------------------------------------------------

enum class Route { wtrick, fallback };

inline const char* to_string(Route r) { return r == Route::wtrick ? "wtrick" : "fallback"; }

struct PipelineParams {
  std::optional<double> w;
  AlphaSource alpha_source = AlphaSource::empirical;
  std::size_t b1_budget = 64;
  double p = 2.1;
  bool prime_pad = true;              // cyclic length: next prime >= 2 N_b + 1
  std::optional<u64> d_max;           // witness search bound on A_b, default N_b
  unsigned threads = 1;
};

struct PipelineResult {
  APWitness witness;
  Route route = Route::wtrick;
  Selection selection;
  TransferenceReport report;
  std::size_t cyclic_length = 0;
  u64 spectral_count = 0;
  std::string fallback_reason;
};

/// Checks the triple against `host` and, when present, the pullback into A.
inline bool verify_witness(const APWitness& w, std::span<const u64> A, const WContext* ctx,
                           std::span<const u64> Ab = {}) {
  if (w.d == 0) return false;
  if (w.triple != std::array<i64, 3>{w.n, w.n + w.d, w.n + 2 * w.d}) return false;
  const std::unordered_set<u64> inA(A.begin(), A.end());
  auto in = [](const std::unordered_set<u64>& s, i64 v) { return v > 0 && s.count(static_cast<u64>(v)) > 0; };
  if (!w.pulled_back) {
    return in(inA, w.triple[0]) && in(inA, w.triple[1]) && in(inA, w.triple[2]);
  }
  if (ctx == nullptr) return false;
  const std::unordered_set<u64> inAb(Ab.begin(), Ab.end());
  if (!(in(inAb, w.triple[0]) && in(inAb, w.triple[1]) && in(inAb, w.triple[2]))) return false;
  const auto b1 = static_cast<i64>(ctx->b1), W = static_cast<i64>(ctx->W), b2 = static_cast<i64>(ctx->b2);
  const i64 x0 = b1 * (W * w.n - b2), D = b1 * W * w.d;
  if (w.pulled_back->x0 != x0 || w.pulled_back->D != D) return false;
  return in(inA, x0) && in(inA, x0 + D) && in(inA, x0 + 2 * D);
}

inline PipelineResult find_3ap_pipeline(std::span<const u64> A, const SmoothSieve& sieve, u64 N,
                                        u64 y, const PipelineParams& params = {}) {
  SelectOptions sopts;
  sopts.w = params.w;
  sopts.alpha_source = params.alpha_source;
  sopts.b1_budget = params.b1_budget;

  PipelineResult out;
  out.selection = select_b(A, sieve, N, y, sopts);
  const WContext& ctx = out.selection.ctx;

  const auto weights = nu_sequence(ctx, sieve);
  const auto Ab = map_to_Ab(A, ctx);
  const auto fb = restrict_to(Ab, weights);
  const auto f_cyc = to_cyclic(fb, ctx.Nb);
  const auto nu_cyc = to_cyclic(weights, ctx.Nb);
  out.report = transference_audit(f_cyc, nu_cyc, params.p, ctx);

  out.cyclic_length = params.prime_pad ? next_prime(2 * ctx.Nb + 1) : 2 * ctx.Nb + 1;
  out.spectral_count = count_3aps_spectral(Ab, out.cyclic_length);

  const std::unordered_set<u64> inA(A.begin(), A.end());
  if (out.spectral_count > 0) {
    std::vector<std::uint8_t> member(ctx.Nb + 1, 0);
    for (u64 n : Ab) member[n] = 1;
    const u64 d_max = params.d_max.value_or(ctx.Nb);
    const auto b1 = static_cast<i64>(ctx.b1), W = static_cast<i64>(ctx.W), b2 = static_cast<i64>(ctx.b2);
    for (u64 d = 1; d <= d_max; ++d) {
      for (u64 n : Ab) {
        if (n + 2 * d > ctx.Nb) break;
        if (!member[n + d] || !member[n + 2 * d]) continue;
        APWitness w = make_witness(static_cast<i64>(n), static_cast<i64>(d));
        const i64 x0 = b1 * (W * w.n - b2), D = b1 * W * w.d;
        w.pulled_back = PullBack{x0, D};
        if (verify_witness(w, A, &ctx, Ab)) {
          out.witness = w;
          out.route = Route::wtrick;
          return out;
        }
      }
    }
    out.fallback_reason = "no witness within d_max=" + std::to_string(d_max);
  } else {
    out.fallback_reason = "spectral count on A_b is zero";
  }

  const auto brute = count_3aps_brute(A, 1, params.threads);
  if (brute.count == 0) {
    fail(ErrorKind::no_progression,
         "find_3ap_pipeline: no 3-term progression in A by either route (" + out.fallback_reason + ")");
  }
  out.witness = brute.witnesses.front();
  out.route = Route::fallback;
  return out;
}

}  // namespace smoothlab
