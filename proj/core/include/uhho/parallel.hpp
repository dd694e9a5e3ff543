#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace uhho {

/// Chunked parallel loop over [0, n). `nthreads == 0` picks the hardware
/// concurrency, `1` runs inline. Work is split into contiguous blocks so
/// results written by index stay deterministic. The first exception thrown
/// by a worker is rethrown on the calling thread.
inline void parallel_for(int n, int nthreads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (nthreads == 0) nthreads = static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, n));
  if (nthreads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::exception_ptr err;
  std::mutex err_mtx;
  const int chunk = (n + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&, lo, hi]() {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mtx);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace uhho
