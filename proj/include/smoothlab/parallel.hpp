#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace smoothlab {

inline unsigned default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Splits [begin, end) into `threads` contiguous chunks, evaluates
// `chunk(lo, hi)` on each and folds the partial results left to right.
// The fold order is fixed, so the result does not depend on scheduling.
template <typename T, typename Chunk, typename Combine>
T parallel_reduce(std::size_t begin, std::size_t end, unsigned threads,
                  T init, Chunk chunk, Combine combine) {
  if (end <= begin) return init;
  const std::size_t total = end - begin;
  const std::size_t parts =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, total));
  if (parts == 1) return combine(std::move(init), chunk(begin, end));

  std::vector<T> partial(parts);
  std::vector<std::thread> workers;
  workers.reserve(parts);
  for (std::size_t k = 0; k < parts; ++k) {
    const std::size_t lo = begin + total * k / parts;
    const std::size_t hi = begin + total * (k + 1) / parts;
    workers.emplace_back([&, k, lo, hi] { partial[k] = chunk(lo, hi); });
  }
  for (auto& t : workers) t.join();
  for (auto& p : partial) init = combine(std::move(init), std::move(p));
  return init;
}

}  // namespace smoothlab
