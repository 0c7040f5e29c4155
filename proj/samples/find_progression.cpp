// Draws a random half of the 100-smooth numbers up to N and looks for a
// three-term progression through the W-trick, then prints the audit.

#include <cstdio>
#include <cstdlib>

#include "smoothlab/random.hpp"
#include "smoothlab/roth.hpp"

int main(int argc, char** argv) {
  using namespace smoothlab;
  const u64 N = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  const auto sieve = build_sieve(N);
  const auto A = random_subset(smooth_set(sieve, 100).members, 0.5, seed);

  try {
    const auto res = find_3ap_pipeline(A, sieve, N, 100);
    const auto& c = res.selection.ctx;
    std::printf("|A| = %zu, W = %llu, b = (%llu, %llu), N_b = %llu\n", A.size(),
                static_cast<unsigned long long>(c.W), static_cast<unsigned long long>(c.b1),
                static_cast<unsigned long long>(c.b2), static_cast<unsigned long long>(c.Nb));
    std::printf("delta %.4f  eta %.4f  eta_0 %.4f  M_p %.4g  trilinear %.4g\n", res.report.delta,
                res.report.eta, res.report.eta_zero, res.report.Mp, res.report.trilinear);
    std::printf("3-APs in A_b (ordered, mod %zu): %llu\n", res.cyclic_length,
                static_cast<unsigned long long>(res.spectral_count));
    const auto& w = res.witness;
    std::printf("route %s: %lld, %lld, %lld", to_string(res.route), static_cast<long long>(w.triple[0]),
                static_cast<long long>(w.triple[1]), static_cast<long long>(w.triple[2]));
    if (w.pulled_back) {
      const auto [x0, D] = *w.pulled_back;
      std::printf("  ->  %lld, %lld, %lld in A", static_cast<long long>(x0),
                  static_cast<long long>(x0 + D), static_cast<long long>(x0 + 2 * D));
    }
    std::printf("\n");
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", std::string(to_string(e.kind())).c_str(), e.what());
    return 1;
  }
}
