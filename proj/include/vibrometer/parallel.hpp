// Copyright 2026 The Vibrometer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vibrometer {

namespace detail {
inline std::atomic<int>& thread_cap_storage() {
  static std::atomic<int> cap{0};  // 0 = unset
  return cap;
}
}  // namespace detail

/// Worker cap used by all parallel regions. Defaults to the environment
/// variable VIBROMETER_THREADS, falling back to hardware concurrency.
inline int max_threads() {
  int cap = detail::thread_cap_storage().load(std::memory_order_relaxed);
  if (cap > 0) return cap;
  if (const char* env = std::getenv("VIBROMETER_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

inline void set_max_threads(int n) {
  detail::thread_cap_storage().store(n > 0 ? n : 0, std::memory_order_relaxed);
}

/// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
/// Chunk boundaries depend only on (n, chunk_size), never on the worker count,
/// so per-chunk results combined in chunk order are bit-identical for any
/// number of threads. Exceptions from workers are rethrown on the caller.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunk_size, Fn&& fn) {
  if (n == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  const int workers =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n_chunks));

  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      const std::size_t lo = c * chunk_size;
      fn(c, lo, std::min(n, lo + chunk_size));
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      try {
        const std::size_t lo = c * chunk_size;
        fn(c, lo, std::min(n, lo + chunk_size));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace vibrometer
