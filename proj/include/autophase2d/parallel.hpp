#ifndef AUTOPHASE2D_PARALLEL_HPP
#define AUTOPHASE2D_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace autophase2d {

inline std::size_t resolve_thread_count(std::size_t requested) noexcept {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Calls body(k) for every k in [0, count), splitting the range into
/// contiguous blocks. body must only write to state owned by index k.
/// The first exception thrown by any worker is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  const std::size_t workers = std::min(resolve_thread_count(threads), count);
  if (workers <= 1 || count < 64) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * block;
      const std::size_t end = std::min(count, begin + block);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t k = begin; k < end; ++k) body(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace autophase2d

#endif  // AUTOPHASE2D_PARALLEL_HPP
