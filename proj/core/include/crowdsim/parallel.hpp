#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace crowdsim {

// Runs body(i) for i in [0, count). Work items must be independent; callers
// keep determinism by writing results into pre-sized slots indexed by i.
template <typename Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      std::size_t i;
      while (!failed.load(std::memory_order_relaxed) &&
             (i = next.fetch_add(1)) < count) {
        try {
          body(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace crowdsim
