/*
 *   Copyright (c) 2026, the bmox authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

#pragma once

#include <cstddef>
#include <limits>
#include <thread>
#include <utility>
#include <vector>

namespace bmox {

/// Argmax of eval(i) over i in [0, n). Ties resolve to the smallest index, so
/// the result does not depend on the number of jobs.
template <typename Eval>
std::pair<double, std::size_t> parallel_argmax(std::size_t n, Eval&& eval,
                                               int jobs) {
  if (n == 0) return {0.0, 0};
  if (jobs < 1) jobs = 1;
  auto threads = static_cast<std::size_t>(jobs);
  if (threads > n) threads = n;

  std::vector<std::pair<double, std::size_t>> best(
      threads, {-std::numeric_limits<double>::infinity(), 0});
  auto work = [&](std::size_t t) {
    std::size_t lo = n * t / threads, hi = n * (t + 1) / threads;
    double bv = -std::numeric_limits<double>::infinity();
    std::size_t bi = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      double v = eval(i);
      if (v > bv) {
        bv = v;
        bi = i;
      }
    }
    best[t] = {bv, bi};
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  auto result = best[0];
  for (std::size_t t = 1; t < threads; ++t)
    if (best[t].first > result.first) result = best[t];
  return result;
}

}  // namespace bmox
