#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace dctk {

/// Worker count for the pure scans (window searches). Defaults to 1.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Argmax of f over [0, n) where f(i) returns std::optional<Key> (nullopt
/// means "skip"). Ties resolve to the smallest index, so the answer does not
/// depend on the number of workers. The first exception in index order is
/// rethrown.
template <class Key, class F>
std::optional<std::pair<Key, std::uint64_t>> parallel_argmax(std::uint64_t n, F&& f) {
  using Best = std::optional<std::pair<Key, std::uint64_t>>;
  auto scan = [&f](std::uint64_t begin, std::uint64_t end, Best& best, std::exception_ptr& err) {
    try {
      for (std::uint64_t i = begin; i < end; ++i) {
        std::optional<Key> k = f(i);
        if (k && (!best || best->first < *k)) best.emplace(*k, i);
      }
    } catch (...) {
      err = std::current_exception();
    }
  };

  const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(thread_count(), n));
  std::vector<Best> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  if (workers == 1) {
    scan(0, n, partial[0], errors[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      std::uint64_t b = std::min(n, w * chunk), e = std::min(n, b + chunk);
      pool.emplace_back(scan, b, e, std::ref(partial[w]), std::ref(errors[w]));
    }
    for (auto& t : pool) t.join();
  }
  Best best;
  for (std::uint64_t w = 0; w < workers; ++w) {
    if (errors[w]) std::rethrow_exception(errors[w]);
    if (partial[w] && (!best || best->first < partial[w]->first)) best = partial[w];
  }
  return best;
}

}  // namespace dctk
