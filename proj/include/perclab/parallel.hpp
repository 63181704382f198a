// Deterministic fork-join map: results land in index order no matter how the
// work is scheduled, so parallel and serial runs produce identical output.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace perclab {

inline unsigned resolve_jobs(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Evaluates fn(i) for i in [0, count) and returns the results in index order.
// fn must be safe to call concurrently for distinct i.
template <typename T, typename Fn>
std::vector<T> map_indexed(std::uint64_t count, unsigned jobs, Fn&& fn) {
  std::vector<T> out(count);
  jobs = resolve_jobs(jobs);
  if (jobs == 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_lock;
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(jobs, count));
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> hold(error_lock);
          if (!failed.exchange(true)) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(first_error);
  return out;
}

}  // namespace perclab
