#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace omds::detail {

// Splits [0, n) into contiguous chunks, one worker thread per chunk. Each
// chunk writes disjoint output, so results do not depend on thread count.
template <typename Fn>
void parallel_chunks(std::uint64_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    fn(std::uint64_t{0}, n);
    return;
  }
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, n));
  const std::uint64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace omds::detail
