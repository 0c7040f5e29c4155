#pragma once

// Command-line front end. `run` parses arguments, dispatches to one
// subcommand and returns the process exit status:
//   0 success, 1 module error or failed verification, 2 usage error.
// Errors are reported on `err` as a one-line JSON record.

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "smoothlab/config.hpp"
#include "smoothlab/error.hpp"
#include "smoothlab/fourier.hpp"
#include "smoothlab/io.hpp"
#include "smoothlab/random.hpp"
#include "smoothlab/roth.hpp"
#include "smoothlab/saddle.hpp"
#include "smoothlab/smooth.hpp"
#include "smoothlab/verify.hpp"
#include "smoothlab/wtrick.hpp"

namespace smoothlab::cli {

using nlohmann::ordered_json;

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void error_record(std::ostream& err, std::string_view kind, const std::string& message) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  err << j.dump() << '\n';
}

inline SmoothSieve sieve_for(const RunConfig& c, u64 N) {
  if (c.cache_dir.empty()) return build_sieve(N);
  return load_or_build_sieve(N, c.cache_dir);
}

inline std::vector<u64> parse_points(const std::string& text) {
  std::vector<u64> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--points: cannot parse '" + item + "'");
    }
    if (used != item.size()) throw UsageError("--points: cannot parse '" + item + "'");
    pts.push_back(v);
  }
  if (pts.empty()) throw UsageError("--points: empty list");
  return pts;
}

inline std::vector<u64> random_smooth_subset(const RunConfig& c, const SmoothSieve& s) {
  return random_subset(smooth_set(s, c.y, c.N).members, c.delta, c.seed);
}

inline void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

inline int cmd_sieve(const RunConfig& c, std::ostream& out) {
  if (c.cache_dir.empty()) throw UsageError("sieve: needs --cache-dir or SMOOTHLAB_CACHE");
  const auto s = load_or_build_sieve(c.N, c.cache_dir);
  const auto path = sieve_cache_path(c.cache_dir, c.N);
  if (c.format == OutputFormat::csv) {
    out << "N,path,bytes\n" << c.N << ',' << path.string() << ','
        << std::filesystem::file_size(path) << '\n';
  } else {
    emit(out, {{"N", s.N}, {"path", path.string()}, {"bytes", std::filesystem::file_size(path)}});
  }
  return 0;
}

inline int cmd_psi(const RunConfig& c, u64 q, std::ostream& out) {
  const auto s = sieve_for(c, c.N);
  const auto set = smooth_set(s, c.y, c.N);
  const auto table = psi_progression_table(set, q);
  const u64 coprime = psi_coprime(set, q);
  if (c.format == OutputFormat::csv) {
    out << "N,y,q,psi,psi_q\n"
        << c.N << ',' << c.y << ',' << q << ',' << set.psi() << ',' << coprime << "\n\na,psi_qa\n";
    for (u64 a = 0; a < q; ++a) out << a << ',' << table[a] << '\n';
  } else {
    emit(out, {{"N", c.N}, {"y", c.y}, {"psi", set.psi()}, {"q", q}, {"psi_q", coprime},
               {"progressions", table}});
  }
  return 0;
}

inline int cmd_alpha(const RunConfig& c, std::ostream& out) {
  const auto sp = solve_alpha(static_cast<double>(c.N), c.y);
  const auto s = sieve_for(c, c.N);
  const auto set = smooth_set(s, c.y, c.N);
  const double emp = alpha_empirical(set);
  if (c.format == OutputFormat::csv) {
    out << "N,y,psi,saddle,residual,empirical\n"
        << c.N << ',' << c.y << ',' << set.psi() << ',' << format_real(sp.alpha) << ','
        << format_real(sp.residual) << ',' << format_real(emp) << '\n';
  } else {
    emit(out, {{"N", c.N}, {"y", c.y}, {"psi", set.psi()}, {"saddle", format_real(sp.alpha)},
               {"residual", format_real(sp.residual)}, {"empirical", format_real(emp)}});
  }
  return 0;
}

inline int cmd_arcs(const RunConfig& c, std::ostream& out) {
  const auto arcs = arc_decomposition(c.N, c.arc_R());
  if (c.format == OutputFormat::csv) {
    out << "a,q,lo,hi\n";
    for (const auto& a : arcs.arcs)
      out << a.a << ',' << a.q << ',' << format_real(a.lo) << ',' << format_real(a.hi) << '\n';
    return 0;
  }
  ordered_json list = ordered_json::array();
  for (const auto& a : arcs.arcs)
    list.push_back({{"a", a.a}, {"q", a.q}, {"lo", format_real(a.lo)}, {"hi", format_real(a.hi)}});
  emit(out, {{"N", arcs.N}, {"R", format_real(arcs.R)}, {"width", format_real(arcs.width)},
             {"overlapping", arcs.overlapping}, {"count", arcs.arcs.size()}, {"arcs", list}});
  return 0;
}

inline int cmd_expsum(const RunConfig& c, std::ostream& out) {
  const auto s = sieve_for(c, c.N);
  const auto f = indicator_sequence<u64>(smooth_set(s, c.y, c.N).members);
  const auto spec = spectrum(f, c.grid_M());
  if (c.format == OutputFormat::csv) {
    write_spectrum_csv(out, spec);
    return 0;
  }
  ordered_json values = ordered_json::array();
  for (const auto& v : spec.values) values.push_back({format_real(v.real()), format_real(v.imag())});
  emit(out, {{"N", c.N}, {"y", c.y}, {"M", spec.M}, {"values", values}});
  return 0;
}

inline int cmd_moment(const RunConfig& c, int steps, std::ostream& out) {
  if (steps < 1) throw UsageError("moment: --steps must be >= 1");
  const u64 top = c.N << (steps - 1);
  const auto s = sieve_for(c, top);
  ordered_json rows = ordered_json::array();
  if (c.format == OutputFormat::csv) out << "N,M,psi,moment,ratio\n";
  for (int k = 0; k < steps; ++k) {
    const u64 N = c.N << k;
    const u64 M = c.grid_M() << k;
    const auto set = smooth_set(s, c.y, N);
    const double psi = static_cast<double>(set.psi());
    const double m = lp_moment<u64>(set.members, c.p, M, c.allow_p2);
    const double ratio = m / (std::pow(psi, c.p) / static_cast<double>(N));
    if (c.format == OutputFormat::csv) {
      out << N << ',' << M << ',' << set.psi() << ',' << format_real(m) << ','
          << format_real(ratio) << '\n';
    } else {
      rows.push_back({{"N", N}, {"M", M}, {"psi", set.psi()}, {"moment", format_real(m)},
                      {"ratio", format_real(ratio)}});
    }
  }
  if (c.format == OutputFormat::json) emit(out, {{"y", c.y}, {"p", format_real(c.p)}, {"rows", rows}});
  return 0;
}

inline int cmd_select(const RunConfig& c, AlphaSource src, std::ostream& out) {
  const auto s = sieve_for(c, c.N);
  const auto A = random_smooth_subset(c, s);
  SelectOptions so;
  so.w = c.w_override;
  so.alpha_source = src;
  const auto sel = select_b(A, s, c.N, c.y, so);
  if (c.format == OutputFormat::csv) {
    out << "b1,b2,W,Nb,alpha,mass,candidates,delta,Ab_size,Ab_kept,mass_ratio\n"
        << sel.ctx.b1 << ',' << sel.ctx.b2 << ',' << sel.ctx.W << ',' << sel.ctx.Nb << ','
        << format_real(sel.ctx.alpha) << ',' << format_real(sel.mass) << ',' << sel.candidates
        << ',' << format_real(sel.delta) << ',' << sel.Ab_size << ',' << sel.Ab_kept << ','
        << format_real(sel.mass_ratio) << '\n';
    return 0;
  }
  emit(out, {{"context", context_to_json(sel.ctx)},
             {"A_size", A.size()},
             {"mass", format_real(sel.mass)},
             {"b1_candidates", sel.b1_candidates},
             {"candidates", sel.candidates},
             {"delta", format_real(sel.delta)},
             {"Ab_size", sel.Ab_size},
             {"discard_threshold", format_real(sel.discard_threshold)},
             {"Ab_kept", sel.Ab_kept},
             {"kept_mass", format_real(sel.kept_mass)},
             {"linear_threshold_held", sel.linear_threshold_held},
             {"power_threshold_held", sel.power_threshold_held},
             {"mass_ratio", format_real(sel.mass_ratio)}});
  return 0;
}

inline int cmd_sigma(const RunConfig& c, u64 qmax, std::ostream& out) {
  std::size_t pairs = 0, failures = 0;
  double worst = 0.0;
  const auto contexts = smoothlab::detail::sigma_contexts(c.seed);
  for (const auto& ctx : contexts) {
    for (u64 q = 1; q <= qmax; ++q) {
      const auto gam = gamma_table(q, ctx);
      for (u64 a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        const cplx d = sigma_aq_closed(static_cast<i64>(a), q, ctx) -
                       sigma_aq_brute(static_cast<i64>(a), q, gam);
        const double gap = std::max(std::abs(d.real()), std::abs(d.imag()));
        worst = std::max(worst, gap);
        ++pairs;
        failures += gap > 1e-9;
      }
    }
  }
  if (c.format == OutputFormat::csv) {
    out << "contexts,qmax,pairs,failures,worst_gap\n"
        << contexts.size() << ',' << qmax << ',' << pairs << ',' << failures << ','
        << format_real(worst) << '\n';
  } else {
    emit(out, {{"contexts", contexts.size()}, {"qmax", qmax}, {"pairs", pairs},
               {"failures", failures}, {"worst_gap", format_real(worst)}});
  }
  return failures == 0 ? 0 : 1;
}

inline int cmd_ap_count(const RunConfig& c, const std::string& points, bool grid_given,
                        std::ostream& out) {
  std::vector<u64> A;
  if (!points.empty()) {
    A = parse_points(points);
  } else {
    const auto s = sieve_for(c, c.N);
    A = random_smooth_subset(c, s);
  }
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  const u64 M = grid_given ? c.grid_M() : 2 * A.back() + 1;
  const u64 brute = count_3aps_brute(A, 0, c.threads).count;
  const u64 spec = count_3aps_spectral(A, M);
  const bool consistent = spec == 2 * brute;
  if (c.format == OutputFormat::csv) {
    out << "size,M,brute,spectral,consistent\n"
        << A.size() << ',' << M << ',' << brute << ',' << spec << ','
        << (consistent ? "true" : "false") << '\n';
  } else {
    emit(out, {{"size", A.size()}, {"M", M}, {"brute", brute}, {"spectral", spec},
               {"consistent", consistent}});
  }
  return consistent ? 0 : 1;
}

inline int cmd_pipeline(const RunConfig& c, AlphaSource src, const std::string& context_path,
                        std::ostream& out) {
  const auto s = sieve_for(c, c.N);
  const auto A = random_smooth_subset(c, s);
  PipelineParams pp;
  pp.w = c.w_override;
  pp.alpha_source = src;
  pp.p = c.p;
  pp.threads = c.threads;
  const auto res = find_3ap_pipeline(A, s, c.N, c.y, pp);
  if (!context_path.empty()) {
    std::ofstream f(context_path);
    require(static_cast<bool>(f), ErrorKind::io, "pipeline: cannot write " + context_path);
    f << context_to_json(res.selection.ctx).dump(2) << '\n';
  }
  if (c.format == OutputFormat::csv) {
    out << "n,d,t0,t1,t2,x0,D,route\n"
        << res.witness.n << ',' << res.witness.d << ',' << res.witness.triple[0] << ','
        << res.witness.triple[1] << ',' << res.witness.triple[2] << ',';
    if (res.witness.pulled_back) out << res.witness.pulled_back->x0 << ',' << res.witness.pulled_back->D;
    else out << ',';
    out << ',' << to_string(res.route) << '\n';
  } else {
    emit(out, witness_to_json(res.witness, res.route));
  }
  return 0;
}

inline int cmd_verify(const RunConfig& c, const std::vector<int>& ids, std::ostream& out) {
  VerifyOptions vo;
  vo.seed = c.seed;
  vo.threads = c.threads;
  std::vector<CriterionResult> results;
  if (ids.empty()) {
    results = run_all(vo);
  } else {
    for (int id : ids) results.push_back(run_criterion(id, vo));
  }
  bool all = true;
  ordered_json rows = ordered_json::array();
  if (c.format == OutputFormat::csv) out << "id,name,passed,seconds,limit,detail\n";
  for (const auto& r : results) {
    all = all && r.passed;
    if (c.format == OutputFormat::csv) {
      std::string detail = r.detail;
      std::replace(detail.begin(), detail.end(), ',', ';');
      out << r.id << ',' << r.name << ',' << (r.passed ? "pass" : "fail") << ','
          << smoothlab::detail::fmt(r.seconds, 4) << ',' << r.limit << ',' << detail << '\n';
    } else {
      rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                      {"seconds", smoothlab::detail::fmt(r.seconds, 4)}, {"limit", r.limit},
                      {"detail", r.detail}});
    }
  }
  if (c.format == OutputFormat::json) emit(out, {{"all_passed", all}, {"criteria", rows}});
  return all ? 0 : 1;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"smooth-number sieves, exponential sums and 3-AP search", "smoothlab"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  double r = 0.0, w = 0.0;
  u64 grid = 0;
  std::string format = "json", cache_dir;
  auto* opt_r = app.add_option("--r", r, "major-arc parameter R (default log^2 N)");
  auto* opt_w = app.add_option("--w", w, "override w (W = product of primes <= w)");
  auto* opt_grid = app.add_option("--grid", grid, "DFT grid size M (default 2N)");
  app.add_option("--n", cfg.N, "range bound N")->capture_default_str();
  app.add_option("--y", cfg.y, "smoothness bound y")->capture_default_str();
  app.add_option("--delta", cfg.delta, "density of the random subset A")->capture_default_str();
  app.add_option("--p", cfg.p, "moment exponent p")->capture_default_str();
  app.add_flag("--allow-p2", cfg.allow_p2, "permit p = 2 (Parseval check)");
  app.add_option("--cache-dir", cache_dir, "sieve cache directory");
  app.add_option("--seed", cfg.seed, "seed for random subsets")->capture_default_str();
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  std::string alpha_source = "empirical";
  app.add_option("--alpha-source", alpha_source, "exponent used by the weight")
      ->check(CLI::IsMember({"empirical", "saddle"}))
      ->capture_default_str();

  auto* sieve = app.add_subcommand("sieve", "build and cache the greatest-prime-factor table");
  auto* psi = app.add_subcommand("psi", "smooth counts, coprime counts and residue classes");
  u64 q = 3;
  psi->add_option("--q", q, "modulus")->capture_default_str()->check(CLI::PositiveNumber);
  auto* alpha = app.add_subcommand("alpha", "saddle-point and empirical exponents");
  auto* arcs = app.add_subcommand("arcs", "major arc list");
  auto* expsum = app.add_subcommand("expsum", "exponential sum of the smooth set on the grid");
  auto* moment = app.add_subcommand("moment", "L^p moment ratios over a doubling schedule");
  int steps = 3;
  moment->add_option("--steps", steps, "number of doublings")->capture_default_str();
  auto* select = app.add_subcommand("wtrick-select", "choose (b1, b2) for a random subset");
  auto* sigma = app.add_subcommand("sigma-check", "closed versus brute sigma sweep");
  u64 qmax = 200;
  sigma->add_option("--qmax", qmax, "largest modulus")->capture_default_str();
  auto* ap = app.add_subcommand("ap-count", "spectral versus brute 3-AP count");
  std::string points;
  ap->add_option("--points", points, "comma-separated set (default: random smooth subset)");
  auto* pipeline = app.add_subcommand("pipeline", "find a 3-AP through the W-trick");
  std::string context_path;
  pipeline->add_option("--context", context_path, "write the selected context JSON here");
  auto* verify = app.add_subcommand("verify-all", "run the acceptance suite");
  std::vector<int> ids;
  verify->add_option("--criterion", ids, "run only these criteria")
      ->check(CLI::Range(1, criterion_count));

  std::vector<std::string> args;
  for (int k = argc - 1; k >= 1; --k) args.emplace_back(argv[k]);
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    detail::error_record(err, "usage", e.what());
    return 2;
  }

  if (*opt_r) cfg.R = r;
  if (*opt_w) cfg.w_override = w;
  if (*opt_grid) cfg.grid = grid;
  cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  cfg.cache_dir = cache_dir;
  apply_environment(cfg);
  const AlphaSource src = alpha_source == "saddle" ? AlphaSource::saddle : AlphaSource::empirical;

  try {
    validate(cfg);
  } catch (const Error& e) {
    detail::error_record(err, "usage", e.what());
    return 2;
  }

  try {
    if (*sieve) return detail::cmd_sieve(cfg, out);
    if (*psi) return detail::cmd_psi(cfg, q, out);
    if (*alpha) return detail::cmd_alpha(cfg, out);
    if (*arcs) return detail::cmd_arcs(cfg, out);
    if (*expsum) return detail::cmd_expsum(cfg, out);
    if (*moment) return detail::cmd_moment(cfg, steps, out);
    if (*select) return detail::cmd_select(cfg, src, out);
    if (*sigma) return detail::cmd_sigma(cfg, qmax, out);
    if (*ap) return detail::cmd_ap_count(cfg, points, cfg.grid.has_value(), out);
    if (*pipeline) return detail::cmd_pipeline(cfg, src, context_path, out);
    if (*verify) return detail::cmd_verify(cfg, ids, out);
  } catch (const detail::UsageError& e) {
    detail::error_record(err, "usage", e.what());
    return 2;
  } catch (const Error& e) {
    detail::error_record(err, to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    detail::error_record(err, "internal", e.what());
    return 1;
  }
  return 2;
}

}  // namespace smoothlab::cli
