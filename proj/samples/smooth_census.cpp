// Prints Psi(N, y), the two exponents and the worst progression bias for a
// few moduli, over N = 10^3 .. 10^6.

#include <cstdio>
#include <cstdlib>

#include "smoothlab/saddle.hpp"
#include "smoothlab/smooth.hpp"

int main(int argc, char** argv) {
  const smoothlab::u64 y = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100;
  const auto sieve = smoothlab::shared_sieve(1000000);

  std::printf("%10s %8s %9s %9s %9s %9s\n", "N", "psi", "saddle", "empirical", "dev q=3", "dev q=7");
  for (smoothlab::u64 N = 1000; N <= 1000000; N *= 10) {
    const auto set = smoothlab::smooth_set(*sieve, y, N);
    std::printf("%10llu %8llu %9.5f %9.5f %9.2e %9.2e\n", static_cast<unsigned long long>(N),
                static_cast<unsigned long long>(set.psi()),
                smoothlab::solve_alpha(static_cast<double>(N), y).alpha,
                smoothlab::alpha_empirical(set), smoothlab::granville_deviation(set, 3),
                smoothlab::granville_deviation(set, 7));
  }
}
