// Copyright 2026 The infoload Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INFOLOAD_PARALLEL_H_
#define INFOLOAD_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace infoload {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Work is handed out
// in contiguous chunks; callers write results into slot i so the output
// never depends on scheduling. The exception thrown for the smallest index
// is rethrown after all workers have joined.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (n == 0) return;
  workers = std::max(1u, workers);
  if (workers == 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 8));
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr first_error;
  std::size_t first_error_index = n;

  auto body = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (i < first_error_index) {
            first_error_index = i;
            first_error = std::current_exception();
          }
        }
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    const unsigned spawned =
        static_cast<unsigned>(std::min<std::size_t>(workers, n)) - 1;
    pool.reserve(spawned);
    for (unsigned t = 0; t < spawned; ++t) pool.emplace_back(body);
    body();
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace infoload

#endif  // INFOLOAD_PARALLEL_H_
