#pragma once

// The acceptance suite: eleven checks, each timed against its own budget.
// A check passes only if its condition holds and it finishes in time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "smoothlab/arith.hpp"
#include "smoothlab/error.hpp"
#include "smoothlab/fourier.hpp"
#include "smoothlab/random.hpp"
#include "smoothlab/roth.hpp"
#include "smoothlab/saddle.hpp"
#include "smoothlab/smooth.hpp"
#include "smoothlab/wtrick.hpp"

namespace smoothlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

namespace detail {

inline std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

// Twenty (W, b2, alpha) frames cycling through W in {2, 6, 30} and
// alpha in {0.3, 0.5, 0.9}; b2 is drawn from the units mod W.
inline std::vector<WContext> sigma_contexts(std::uint64_t seed) {
  const double ws[] = {2.0, 3.0, 5.0};
  const double alphas[] = {0.3, 0.5, 0.9};
  std::vector<WContext> out;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const double w = ws[k % 3];
    const double alpha = alphas[(k / 3) % 3];
    const u64 W = primorial(w);
    std::vector<u64> units;
    for (u64 b = 1; b <= W; ++b)
      if (std::gcd(b, W) == 1) units.push_back(b);
    const auto pick = static_cast<std::size_t>(counter_uniform(seed, k) * units.size());
    out.push_back(assemble_context(1000000, 100, w, alpha, 1, units[std::min(pick, units.size() - 1)]));
  }
  return out;
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
  return s;
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

inline Outcome c1_sigma(const VerifyOptions& o) {
  std::size_t checked = 0, bad = 0;
  double worst = 0.0;
  for (const auto& ctx : sigma_contexts(o.seed)) {
    for (u64 q = 1; q <= 200; ++q) {
      const auto gam = gamma_table(q, ctx);
      const auto roots = fft::unit_roots<double>(q);
      for (u64 a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        const cplx c = sigma_aq_closed(static_cast<i64>(a), q, ctx);
        const cplx b = sigma_aq_brute(static_cast<i64>(a), q, gam, roots);
        const double gap = std::max(std::abs(c.real() - b.real()), std::abs(c.imag() - b.imag()));
        worst = std::max(worst, gap);
        ++checked;
        bad += gap > 1e-9;
      }
    }
  }
  return {bad == 0, std::to_string(checked) + " pairs, " + std::to_string(bad) +
                        " over 1e-9, worst gap " + fmt(worst)};
}

inline Outcome c2_ramanujan(const VerifyOptions&) {
  std::size_t bad = 0, checked = 0;
  double worst = 0.0;
  for (u64 q = 1; q <= 500; ++q) {
    const auto roots = fft::unit_roots<double>(q);
    for (u64 a = 0; a < q; ++a) {
      const double c = ramanujan_sum(q, static_cast<i64>(a));
      const auto b = ramanujan_sum_bruteforce(q, static_cast<i64>(a), roots);
      const double gap = std::max(std::abs(c - b.real()), std::abs(b.imag()));
      worst = std::max(worst, gap);
      ++checked;
      bad += gap > 1e-9;
    }
  }
  return {bad == 0, std::to_string(checked) + " values, worst gap " + fmt(worst)};
}

inline Outcome c3_parseval(const VerifyOptions&) {
  const auto set = smooth_set(*shared_sieve(10000), 100);
  const double m2 = lp_moment<u64>(set.members, 2.0, 1u << 15, true);
  const double psi = static_cast<double>(set.psi());
  const double rel = std::abs(m2 - psi) / psi;
  return {rel <= 1e-6, "moment " + fmt(m2, 12) + " vs Psi " + fmt(psi, 12) + ", rel " + fmt(rel)};
}

inline Outcome c4_spectral(const VerifyOptions& o) {
  std::vector<u64> pool(2000);
  for (u64 n = 0; n < 2000; ++n) pool[n] = n + 1;
  std::size_t bad = 0;
  u64 total = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const double density = 0.05 + 0.9 * counter_uniform(o.seed ^ 0x5eedULL, k);
    const auto A = random_subset(pool, density, o.seed + k);
    if (A.empty()) continue;
    const u64 brute = count_3aps_brute(A, 0, o.threads).count;
    const u64 spec = count_3aps_spectral(A, 2 * A.back() + 1);
    bad += spec != 2 * brute;
    total += brute;
  }
  return {bad == 0, "100 subsets, " + std::to_string(bad) + " mismatches, " +
                        std::to_string(total) + " progressions total"};
}

inline Outcome c5_granville(const VerifyOptions&) {
  const auto s = shared_sieve(1000000);
  const auto lo = smooth_set(*s, 100), hi = smooth_set(*s, 1000);
  bool ok = true;
  std::string d;
  for (u64 q : {3, 5, 7}) {
    const double a = granville_deviation(lo, q), b = granville_deviation(hi, q);
    ok = ok && b < a && a <= 0.5 && b <= 0.5;
    d += "q=" + std::to_string(q) + ": y=100 " + fmt(a) + ", y=1000 " + fmt(b) + "; ";
  }
  return {ok, d};
}

inline Outcome c6_bt(const VerifyOptions&) {
  const auto set = smooth_set(*shared_sieve(1000000), 100);
  const double alpha = solve_alpha(1e6, 100).alpha;
  double lo = 1e300, hi = 0.0;
  std::size_t n = 0;
  for (u64 q = 1; q <= 30; ++q) {
    if (distinct_prime_factors(q).size() > 3) continue;
    const double r = bt_ratio(set, q, alpha);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    ++n;
  }
  return {lo >= 0.5 && hi <= 2.0,
          std::to_string(n) + " moduli, alpha " + fmt(alpha) + ", ratios in [" + fmt(lo) + ", " +
              fmt(hi) + "]"};
}

inline Outcome c7_minor(const VerifyOptions&) {
  const auto s = shared_sieve(1000000);
  std::vector<double> sups;
  std::string d;
  bool ok = true;
  for (u64 N : {10000, 100000, 1000000}) {
    const auto set = smooth_set(*s, 100, N);
    const double l = std::log(static_cast<double>(N));
    const auto arcs = arc_decomposition(N, l * l);
    try {
      const auto sup = minor_arc_sup<u64>(set.members, N, arcs, 2 * N);
      sups.push_back(sup.value / static_cast<double>(set.psi()));
      d += "N=" + std::to_string(N) + " sup/Psi " + fmt(sups.back()) + "; ";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::empty_minor_grid) throw;
      ok = false;
      d += "N=" + std::to_string(N) + " minor grid empty (R/N=" + fmt(arcs.width) + "); ";
    }
  }
  ok = ok && strictly_decreasing(sups);
  return {ok, d};
}

inline Outcome c8_harper(const VerifyOptions&) {
  const auto s = shared_sieve(40000);
  std::vector<double> ratios;
  for (u64 N : {10000, 20000, 40000}) {
    const auto set = smooth_set(*s, 100, N);
    const double psi = static_cast<double>(set.psi());
    const double m = lp_moment<u64>(set.members, 2.5, 2 * N);
    ratios.push_back(m / (std::pow(psi, 2.5) / static_cast<double>(N)));
  }
  const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *mx / *mn;
  return {spread < 4.0, "ratios " + join(ratios) + ", spread " + fmt(spread)};
}

inline Outcome c9_nu(const VerifyOptions& o) {
  const auto s = shared_sieve(1000000);
  auto best_context = [&](u64 N, double w) {
    const auto A = random_subset(smooth_set(*s, 100, N).members, 0.5, o.seed);
    SelectOptions so;
    so.w = w;
    return select_b(A, *s, N, 100, so).ctx;
  };

  const auto top = best_context(1000000, 2.0);
  const double ratio = nu_total(top, *s) / static_cast<double>(top.Nb);
  const bool mass_ok = ratio >= 0.5 && ratio <= 1.5;

  std::vector<double> eta, eta7;
  for (u64 N : {10000, 100000, 1000000}) {
    eta.push_back(nu_fourier_max(best_context(N, 2.0), *s).value);
    eta7.push_back(nu_fourier_max(best_context(N, 7.0), *s).value);
  }
  const bool eta_ok = strictly_decreasing(eta);
  return {mass_ok && eta_ok,
          "sum nu / N_b " + fmt(ratio) + " (b1=" + std::to_string(top.b1) + ", b2=" +
              std::to_string(top.b2) + "); eta at w=2: " + join(eta) +
              (eta_ok ? "" : " (not decreasing)") + "; eta at w=7 for comparison: " + join(eta7)};
}

inline Outcome c10_pipeline(const VerifyOptions& o) {
  const auto s = shared_sieve(100000);
  const auto A = random_subset(smooth_set(*s, 100).members, 0.5, o.seed);
  PipelineParams pp;
  pp.threads = o.threads;
  const auto res = find_3ap_pipeline(A, *s, 100000, 100, pp);
  const auto Ab = map_to_Ab(A, res.selection.ctx);
  const bool ok = verify_witness(res.witness, A, &res.selection.ctx, Ab) &&
                  res.witness.pulled_back.has_value();
  std::string d = "|A|=" + std::to_string(A.size()) + ", route " + to_string(res.route) +
                  ", triple (" + std::to_string(res.witness.triple[0]) + ", " +
                  std::to_string(res.witness.triple[1]) + ", " +
                  std::to_string(res.witness.triple[2]) + ")";
  if (res.witness.pulled_back)
    d += ", pulled back x0=" + std::to_string(res.witness.pulled_back->x0) +
         " D=" + std::to_string(res.witness.pulled_back->D);
  return {ok, d};
}

inline Outcome c11_gamma(const VerifyOptions& o) {
  std::size_t bad = 0, checked = 0;
  double worst = 0.0;  // max gamma / q
  for (const auto& ctx : sigma_contexts(o.seed)) {
    for (u64 q = 1; q <= 200; ++q) {
      for (u64 r = 0; r < q; ++r) {
        const double g = gamma_rq(static_cast<i64>(r), q, ctx.W, static_cast<i64>(ctx.b2), ctx.alpha);
        worst = std::max(worst, std::abs(g) / static_cast<double>(q));
        ++checked;
        bad += std::abs(g) > static_cast<double>(q);
      }
    }
  }
  return {bad == 0, std::to_string(checked) + " values, max |gamma|/q " + fmt(worst)};
}

struct Spec {
  int id;
  const char* name;
  double limit;
  Outcome (*run)(const VerifyOptions&);
};

inline const std::vector<Spec>& criteria() {
  static const std::vector<Spec> list{
      {1, "sigma closed form vs brute force", 10.0, c1_sigma},
      {2, "Ramanujan sum closed form vs brute force", 5.0, c2_ramanujan},
      {3, "Parseval at p = 2", 5.0, c3_parseval},
      {4, "spectral 3-AP count = 2 x brute", 30.0, c4_spectral},
      {5, "Granville deviation shrinks with y", 60.0, c5_granville},
      {6, "coprime-count ratio band", 60.0, c6_bt},
      {7, "minor-arc sup decreases with N", 300.0, c7_minor},
      {8, "L^2.5 moment ratio stays bounded", 120.0, c8_harper},
      {9, "nu mass and Fourier decay", 180.0, c9_nu},
      {10, "end-to-end 3-AP witness", 60.0, c10_pipeline},
      {11, "gamma bounded by q", 10.0, c11_gamma},
  };
  return list;
}

}  // namespace detail

inline constexpr int criterion_count = 11;

inline CriterionResult run_criterion(int id, const VerifyOptions& opts = {}) {
  require(id >= 1 && id <= criterion_count, ErrorKind::invalid_argument,
          "run_criterion: id must be in [1, 11]");
  const auto& spec = detail::criteria()[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = spec.id;
  r.name = spec.name;
  r.limit = spec.limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto out = spec.run(opts);
    r.passed = out.passed;
    r.detail = out.detail;
  } catch (const Error& e) {
    r.passed = false;
    r.detail = std::string("error ") + std::string(to_string(e.kind())) + ": " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > r.limit) {
    r.passed = false;
    r.detail += " [over time budget]";
  }
  return r;
}

inline std::vector<CriterionResult> run_all(const VerifyOptions& opts = {}) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= criterion_count; ++id) out.push_back(run_criterion(id, opts));
  return out;
}

}  // namespace smoothlab
