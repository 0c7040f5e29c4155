#pragma once

// Run configuration shared by every CLI subcommand.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "smoothlab/arith.hpp"
#include "smoothlab/error.hpp"
#include "smoothlab/parallel.hpp"

namespace smoothlab {

enum class OutputFormat { csv, json };

struct RunConfig {
  u64 N = 100000;
  u64 y = 100;
  std::optional<double> R;           // default log^2 N
  std::optional<double> w_override;
  double delta = 0.5;
  double p = 2.1;
  bool allow_p2 = false;
  std::optional<u64> grid;           // default 2N
  std::filesystem::path cache_dir;   // empty: no on-disk cache
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::json;
  unsigned threads = default_threads();

  double arc_R() const {
    if (R) return *R;
    const double l = std::log(static_cast<double>(N));
    return l * l;
  }
  u64 grid_M() const { return grid.value_or(2 * N); }
};

/// SMOOTHLAB_CACHE, when set and non-empty, replaces cache_dir.
inline void apply_environment(RunConfig& c) {
  if (const char* env = std::getenv("SMOOTHLAB_CACHE"); env != nullptr && *env != '\0')
    c.cache_dir = env;
}

inline void validate(const RunConfig& c) {
  require(c.N >= 1 && c.y >= 1, ErrorKind::invalid_argument, "config: N and y must be positive");
  require(!c.R || *c.R > 0.0, ErrorKind::invalid_argument, "config: R must be positive");
  require(c.delta > 0.0 && c.delta <= 1.0, ErrorKind::invalid_argument,
          "config: delta must lie in (0, 1]");
  const bool p_ok = (c.p > 2.0 && c.p < 3.0) || (c.p == 2.0 && c.allow_p2);
  require(p_ok, ErrorKind::invalid_argument,
          "config: p must lie in (2, 3) (p = 2 needs --allow-p2)");
  require(c.grid_M() >= 2 * c.N, ErrorKind::invalid_argument,
          "config: grid M=" + std::to_string(c.grid_M()) + " must be >= 2N=" +
              std::to_string(2 * c.N));
  require(c.threads >= 1, ErrorKind::invalid_argument, "config: threads must be >= 1");
}

}  // namespace smoothlab
