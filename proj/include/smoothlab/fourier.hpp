#pragma once

// Exponential sums over integer sets, grid spectra, the major/minor arc
// decomposition and L^p moments on a DFT grid.
//
// Real sequences are stored with f[n] = f(n) starting at n = 0. The audits
// sum over 1 <= n <= N = f.size() - 1 and never read f[0].

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothlab/arith.hpp"
#include "smoothlab/error.hpp"
#include "smoothlab/fft.hpp"

namespace smoothlab {

using cplx = std::complex<double>;

/// e(t) = exp(2 pi i t) after reducing t modulo 1 in extended precision.
inline cplx unit_phase(long double t) {
  const long double frac = t - std::floor(t);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * frac;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

template <std::integral T>
cplx exp_sum(std::span<const T> points, double theta) {
  cplx acc{};
  for (T n : points) acc += unit_phase(static_cast<long double>(n) * theta);
  return acc;
}

struct Spectrum {
  std::size_t M = 0;
  std::vector<cplx> values;  // values[j] = sum_n f(n) e(n j / M)
};

/// Grid evaluation of f^ at j / M, j in [0, M). Needs M > N = f.size() - 1.
inline Spectrum spectrum(std::span<const double> f, std::size_t M) {
  if (M < f.size() || M == 0) {
    fail(ErrorKind::aliasing,
         "spectrum: grid M=" + std::to_string(M) + " must exceed N=" +
             std::to_string(f.empty() ? 0 : f.size() - 1));
  }
  return {M, fft::transform_real<double, double>(f, M, +1)};
}

template <std::integral T>
std::vector<double> indicator_sequence(std::span<const T> points) {
  T top = 0;
  for (T n : points) {
    require(n >= 0, ErrorKind::invalid_argument,
            "indicator_sequence: points must be nonnegative");
    top = std::max(top, n);
  }
  std::vector<double> f(static_cast<std::size_t>(top) + 1, 0.0);
  for (T n : points) f[static_cast<std::size_t>(n)] = 1.0;
  return f;
}

/// tau(theta) = (1/N) sum_{n <= N} e(n theta), closed geometric form.
inline cplx tau(double theta, u64 N) {
  require(N >= 1, ErrorKind::invalid_argument, "tau: N must be >= 1");
  const long double t = static_cast<long double>(theta);
  const long double frac = t - std::floor(t);
  if (frac == 0.0L) return {1.0, 0.0};
  const long double pi = std::numbers::pi_v<long double>;
  const long double nn = static_cast<long double>(N);
  // sum = e((N + 1) theta / 2) sin(pi N theta) / sin(pi theta)
  const long double ratio = std::sin(pi * nn * frac) / std::sin(pi * frac);
  const cplx phase = unit_phase((nn + 1.0L) * frac / 2.0L);
  return phase * static_cast<double>(ratio / nn);
}

// ---------------------------------------------------------------------------
// Major arcs: union over q <= R, (a, q) = 1 of [a/q - R/N, a/q + R/N].
// ---------------------------------------------------------------------------

struct Arc {
  u64 a = 0;
  u64 q = 1;
  double lo = 0.0;  // clipped to [0, 1]
  double hi = 0.0;
};

struct MajorLabel {
  u64 a = 0;
  u64 q = 1;
  bool operator==(const MajorLabel&) const = default;
};

struct ArcSet {
  u64 N = 0;
  double R = 0.0;
  double width = 0.0;       // R / N
  std::vector<Arc> arcs;    // ordered by q, then a
  bool overlapping = false;

  u64 max_q() const { return static_cast<u64>(std::floor(R)); }

  /// Major label with the smallest q whose arc contains theta; nullopt = minor.
  std::optional<MajorLabel> classify(double theta) const {
    for (u64 q = 1; q <= max_q(); ++q) {
      const double qd = static_cast<double>(q);
      const auto a_lo = static_cast<i64>(std::ceil((theta - width) * qd));
      const auto a_hi = static_cast<i64>(std::floor((theta + width) * qd));
      std::optional<MajorLabel> best;
      double best_dist = 0.0;
      for (i64 a = std::max<i64>(a_lo, 0); a <= std::min<i64>(a_hi, static_cast<i64>(q)); ++a) {
        if (std::gcd(static_cast<u64>(a), q) != 1) continue;
        const double dist = std::abs(theta - static_cast<double>(a) / qd);
        if (dist > width) continue;
        if (!best || dist < best_dist) {
          best = MajorLabel{static_cast<u64>(a), q};
          best_dist = dist;
        }
      }
      if (best) return best;
    }
    return std::nullopt;
  }
};

inline ArcSet arc_decomposition(u64 N, double R) {
  require(N >= 1 && R >= 1.0, ErrorKind::invalid_argument,
          "arc_decomposition: need N >= 1 and R >= 1");
  ArcSet set;
  set.N = N;
  set.R = R;
  set.width = R / static_cast<double>(N);
  for (u64 q = 1; q <= set.max_q(); ++q) {
    for (u64 a = 0; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double c = static_cast<double>(a) / static_cast<double>(q);
      set.arcs.push_back({a, q, std::max(0.0, c - set.width), std::min(1.0, c + set.width)});
    }
  }
  std::vector<double> centers;
  centers.reserve(set.arcs.size());
  for (const auto& arc : set.arcs)
    centers.push_back(static_cast<double>(arc.a) / static_cast<double>(arc.q));
  std::sort(centers.begin(), centers.end());
  for (std::size_t k = 1; k < centers.size(); ++k)
    if (centers[k] - centers[k - 1] <= 2.0 * set.width) set.overlapping = true;
  return set;
}

/// mask[j] = 1 iff j / M lies on a major arc. Uses the same predicate as
/// ArcSet::classify, so the two always agree on major versus minor.
inline std::vector<std::uint8_t> major_mask(const ArcSet& arcs, std::size_t M) {
  std::vector<std::uint8_t> mask(M, 0);
  const double md = static_cast<double>(M);
  for (const auto& arc : arcs.arcs) {
    const double c = static_cast<double>(arc.a) / static_cast<double>(arc.q);
    const auto j_lo = static_cast<i64>(std::floor((c - arcs.width) * md)) - 1;
    const auto j_hi = static_cast<i64>(std::ceil((c + arcs.width) * md)) + 1;
    for (i64 j = std::max<i64>(j_lo, 0); j <= std::min<i64>(j_hi, static_cast<i64>(M) - 1); ++j) {
      const double theta = static_cast<double>(j) / md;
      if (std::abs(theta - c) <= arcs.width) mask[static_cast<std::size_t>(j)] = 1;
    }
  }
  return mask;
}

struct MinorArcSup {
  double theta = 0.0;
  double value = 0.0;        // max |S(j/M)| over minor grid points
  std::size_t minor_points = 0;
};

template <std::integral T>
MinorArcSup minor_arc_sup(std::span<const T> points, u64 N, const ArcSet& arcs,
                          std::size_t M) {
  require(M >= 2 * N, ErrorKind::invalid_argument,
          "minor_arc_sup: grid M must be >= 2N");
  for (T n : points)
    require(n >= 0 && static_cast<u64>(n) <= N, ErrorKind::invalid_argument,
            "minor_arc_sup: points must lie in [0, N]");
  const auto mask = major_mask(arcs, M);
  const auto f = indicator_sequence(points);
  const Spectrum s = spectrum(f, M);

  MinorArcSup best;
  bool found = false;
  for (std::size_t j = 0; j < M; ++j) {
    if (mask[j]) continue;
    ++best.minor_points;
    const double v = std::abs(s.values[j]);
    if (!found || v > best.value) {
      best.value = v;
      best.theta = static_cast<double>(j) / static_cast<double>(M);
      found = true;
    }
  }
  if (!found) {
    fail(ErrorKind::empty_minor_grid,
         "minor_arc_sup: every grid point is major (N=" + std::to_string(N) +
             ", R=" + std::to_string(arcs.R) + ")");
  }
  return best;
}

/// (1/M) sum_j |S(j/M)|^p. p = 2 is only accepted with allow_p2 (Parseval).
template <std::integral T>
double lp_moment(std::span<const T> points, double p, std::size_t M,
                 bool allow_p2 = false) {
  if (p < 2.0 || (p == 2.0 && !allow_p2)) {
    fail(ErrorKind::invalid_argument,
         "lp_moment: p must exceed 2 (p = 2 needs the explicit allow flag)");
  }
  T top = 0;
  for (T n : points) top = std::max(top, n);
  const auto need = p == 2.0 ? static_cast<std::size_t>(top) + 1
                             : 2 * static_cast<std::size_t>(top);
  if (M < need || M == 0) {
    fail(ErrorKind::aliasing, "lp_moment: grid M=" + std::to_string(M) +
                                  " below required " + std::to_string(need));
  }
  const auto f = indicator_sequence(points);
  const Spectrum s = spectrum(f, M);
  double acc = 0.0;
  for (const auto& v : s.values) acc += std::pow(std::abs(v), p);
  return acc / static_cast<double>(M);
}

struct AuditResult {
  cplx lhs;
  cplx rhs;
  double gap = 0.0;
};

/// lhs = sum_{n <= N, n = r mod q} f(n) e(n theta); rhs = gamma tau(theta) / q.
inline AuditResult residue_sum_audit(std::span<const double> f, i64 r, u64 q,
                                     double theta, double gamma) {
  require(q >= 1 && f.size() >= 2, ErrorKind::invalid_argument,
          "residue_sum_audit: need q >= 1 and N >= 1");
  const u64 N = f.size() - 1;
  const u64 start = static_cast<u64>(((r % static_cast<i64>(q)) + static_cast<i64>(q)) %
                                     static_cast<i64>(q));
  AuditResult out;
  for (u64 n = start == 0 ? q : start; n <= N; n += q)
    out.lhs += f[n] * unit_phase(static_cast<long double>(n) * theta);
  out.rhs = gamma / static_cast<double>(q) * tau(theta, N);
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

/// lhs = f^(theta) = sum_{n <= N} f(n) e(n theta); rhs = sigma tau(theta - a/q) / q.
inline AuditResult major_arc_audit(std::span<const double> f, i64 a, u64 q,
                                   double theta, cplx sigma) {
  require(q >= 1 && f.size() >= 2, ErrorKind::invalid_argument,
          "major_arc_audit: need q >= 1 and N >= 1");
  const u64 N = f.size() - 1;
  AuditResult out;
  for (u64 n = 1; n <= N; ++n)
    out.lhs += f[n] * unit_phase(static_cast<long double>(n) * theta);
  out.rhs = sigma / static_cast<double>(q) *
            tau(theta - static_cast<double>(a) / static_cast<double>(q), N);
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace smoothlab
