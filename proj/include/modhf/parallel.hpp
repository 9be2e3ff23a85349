#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace modhf {

// Worker count: hardware concurrency, capped by the MODHF_THREADS env var.
inline int worker_count() {
  static const int cached = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("MODHF_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) n = std::min(n, cap);
    }
    return n;
  }();
  return cached;
}

// Runs fn(chunk_index, begin, end) over [0, count) split into a fixed number
// of chunks. The chunk layout does not depend on the worker count, so any
// reduction merged in chunk order is reproducible for every thread setting.
template <class Fn>
void parallel_chunks(std::size_t count, Fn&& fn, int chunks = 64) {
  if (count == 0) return;
  const std::size_t nchunks = std::min<std::size_t>(chunks, count);
  const int workers = std::min<std::size_t>(worker_count(), nchunks);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = count * c / nchunks;
    const std::size_t end = count * (c + 1) / nchunks;
    fn(c, begin, end);
  };

  if (workers <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) run_chunk(c);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < nchunks; c += workers) run_chunk(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace modhf
