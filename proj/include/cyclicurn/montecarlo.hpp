#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "cyclicurn/rng.hpp"

namespace cyclicurn {

/// Runs fn(replicate, rng) for replicate = 0..count-1 on `threads` workers.
/// Replicate r always receives Rng::for_stream(master_seed, r) and its result
/// lands in slot r, so the output does not depend on scheduling.
template <class Fn>
auto run_replicates(std::size_t count, unsigned threads, std::uint64_t master_seed, Fn&& fn) {
  using Result = decltype(fn(std::size_t{0}, std::declval<Rng&>()));
  std::vector<Result> results(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < count; r = next.fetch_add(1)) {
      try {
        Rng rng = Rng::for_stream(master_seed, r);
        results[r] = fn(r, rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace cyclicurn
