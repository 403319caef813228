// Copyright 2026 The diophlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic fork-join over a fixed chunk decomposition. The chunking
// never depends on the thread count and results come back in chunk order,
// so merged outputs are identical for any number of workers.

#ifndef DIOPHLAB_PARALLEL_HPP_
#define DIOPHLAB_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace diophlab {

struct ChunkRange {
  size_t index;
  uint64_t begin;
  uint64_t end;
};

inline std::vector<ChunkRange> make_chunks(uint64_t begin, uint64_t end, uint64_t chunk) {
  std::vector<ChunkRange> out;
  if (chunk == 0) chunk = 1;
  for (uint64_t b = begin; b < end; b += chunk) {
    out.push_back({out.size(), b, std::min(end, b + chunk)});
  }
  return out;
}

template <class R, class F>
std::vector<R> run_chunks(const std::vector<ChunkRange>& chunks, int threads, F&& fn) {
  std::vector<R> results(chunks.size());
  std::vector<std::exception_ptr> errors(chunks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= chunks.size()) return;
      try {
        results[i] = fn(chunks[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(chunks.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace diophlab

#endif  // DIOPHLAB_PARALLEL_HPP_
