#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace quasifix {

/// Worker count: QUASIFIX_THREADS env var caps internal parallelism
/// (0 or unset = hardware concurrency).
inline unsigned thread_count() {
  static const unsigned value = [] {
    if (const char* env = std::getenv("QUASIFIX_THREADS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1u;
  }();
  return value;
}

/// Number of chunks a loop of size n will be split into.
inline std::size_t plan_chunks(std::size_t n, std::size_t min_per_chunk) {
  if (n == 0) return 0;
  std::size_t by_work = std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_per_chunk));
  return std::min<std::size_t>(thread_count(), by_work);
}

/// Runs body(chunk_index, begin, end) over [0, n) split into nchunks
/// contiguous ranges. Callers merge per-chunk results in chunk order so
/// reports are identical regardless of scheduling.
template <class Body>
void run_chunks(std::size_t n, std::size_t nchunks, Body&& body) {
  if (n == 0 || nchunks == 0) return;
  if (nchunks == 1) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(nchunks);
  std::size_t base = n / nchunks, rem = n % nchunks, begin = 0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    std::size_t len = base + (c < rem ? 1 : 0);
    threads.emplace_back([&body, c, begin, len] { body(c, begin, begin + len); });
    begin += len;
  }
  for (auto& t : threads) t.join();
}

}  // namespace quasifix
