#pragma once

// Wire formats: WContext JSON, witness JSON, spectrum CSV.

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"
#include "smoothlab/error.hpp"
#include "smoothlab/fourier.hpp"
#include "smoothlab/roth.hpp"
#include "smoothlab/wtrick.hpp"

namespace smoothlab {

/// Shortest-safe round-trippable decimal rendering of a double.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::ordered_json context_to_json(const WContext& c) {
  nlohmann::ordered_json j;
  j["N"] = c.N;
  j["y"] = c.y;
  j["w"] = format_real(c.w);
  j["W"] = c.W;
  j["alpha"] = format_real(c.alpha);
  j["b1"] = c.b1;
  j["b2"] = c.b2;
  j["Nb"] = c.Nb;
  j["CW"] = format_real(c.CW);
  return j;
}

/// Rebuilds a context from its JSON form and re-checks every invariant.
inline WContext context_from_json(const nlohmann::json& j) {
  try {
    auto real = [&](const char* key) { return std::stod(j.at(key).get<std::string>()); };
    const u64 N = j.at("N").get<u64>(), y = j.at("y").get<u64>();
    WContext c = detail::assemble_context(N, y, real("w"), real("alpha"), j.at("b1").get<u64>(),
                                          j.at("b2").get<u64>());
    require(c.W == j.at("W").get<u64>() && c.Nb == j.at("Nb").get<u64>(), ErrorKind::format,
            "context_from_json: W or Nb inconsistent with (N, w, b1)");
    const double cw = real("CW");
    require(std::abs(cw - c.CW) <= 1e-12 * std::abs(c.CW), ErrorKind::format,
            "context_from_json: CW inconsistent with (W, alpha)");
    c.CW = cw;
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::format, std::string("context_from_json: ") + e.what());
  } catch (const std::logic_error& e) {
    fail(ErrorKind::format, std::string("context_from_json: ") + e.what());
  }
}

inline nlohmann::ordered_json witness_to_json(const APWitness& w, Route route) {
  nlohmann::ordered_json j;
  j["n"] = w.n;
  j["d"] = w.d;
  j["triple"] = {w.triple[0], w.triple[1], w.triple[2]};
  if (w.pulled_back) {
    j["pulled_back"] = {{"x0", w.pulled_back->x0}, {"D", w.pulled_back->D}};
  } else {
    j["pulled_back"] = nullptr;
  }
  j["route"] = to_string(route);
  return j;
}

inline void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "j,theta,re,im,abs\n";
  for (std::size_t j = 0; j < s.M; ++j) {
    const auto& v = s.values[j];
    out << j << ',' << format_real(static_cast<double>(j) / static_cast<double>(s.M)) << ','
        << format_real(v.real()) << ',' << format_real(v.imag()) << ','
        << format_real(std::abs(v)) << '\n';
  }
}

}  // namespace smoothlab
