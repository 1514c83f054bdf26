#pragma once

#include <algorithm>
#include <thread>
#include <utility>
#include <vector>

namespace permpat {

// Runs fn(worker_index, begin, end) over contiguous blocks of [0, total).
// Callers own per-worker accumulators and merge them in worker order, so
// results do not depend on scheduling.
template <class Fn>
inline void parallel_blocks(long long total, int workers, Fn&& fn) {
  if (total <= 0) return;
  workers = std::max(1, workers);
  workers = static_cast<int>(std::min<long long>(workers, total));
  if (workers == 1) {
    fn(0, 0LL, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const long long begin = total * w / workers;
    const long long end = total * (w + 1) / workers;
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace permpat
