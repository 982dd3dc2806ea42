#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace olp {

// OLP_LAB_THREADS when set to a positive integer, else the logical core count.
inline std::size_t default_threads() {
  if (const char* env = std::getenv("OLP_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Runs f(i) for i in [0, count) on up to `threads` workers (0 = default).
// Work items write to their own slots; if several fail, the exception of the
// lowest index is rethrown so failures do not depend on scheduling.
template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& f) {
  if (threads == 0) threads = default_threads();
  std::vector<std::exception_ptr> errors(count);
  auto body = [&](std::size_t i) {
    try {
      f(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    const std::size_t workers = std::min(threads, count);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace olp
