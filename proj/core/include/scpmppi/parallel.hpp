#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace scpmppi {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs body(i) for i in [0, n). Tasks must write only their own slots;
// results are then deterministic regardless of the thread count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::min(resolve_threads(threads), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (int i = w; i < n; i += threads) body(i);
    });
  }
  for (auto& worker : workers) worker.join();
}

}  // namespace scpmppi
