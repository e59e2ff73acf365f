#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zeroone {

/// Splits [0, count) into contiguous chunks and runs body(chunk, begin, end)
/// on each, one chunk per worker. Results must be written to per-index or
/// per-chunk slots and reduced in a fixed order afterwards, so the outcome is
/// independent of the thread count. The first exception thrown by a worker is
/// rethrown on the calling thread after the pool joins.
template <typename Body>
void parallel_for_chunks(std::uint64_t count, int threads, Body&& body) {
  if (threads <= 1 || count < 2) {
    body(std::size_t{0}, std::uint64_t{0}, count);
    return;
  }
  const auto workers = static_cast<std::uint64_t>(threads);
  const std::uint64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    if (begin >= count) break;
    const std::uint64_t end = begin + chunk < count ? begin + chunk : count;
    pool.emplace_back([&body, &first_error, &error_mutex, w, begin, end] {
      try {
        body(static_cast<std::size_t>(w), begin, end);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace zeroone
