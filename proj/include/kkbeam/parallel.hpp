/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The kkbeam Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace kkbeam {

/// Thread count from KKBEAM_THREADS when set, else `fallback`. Always >= 1.
int resolve_threads(int fallback);

/// Runs body(i) for i in [begin, end) on `threads` workers with static
/// contiguous chunks. Every index is executed by exactly one worker, so a body
/// that only writes outputs owned by i gives results independent of the
/// thread count.
template <typename Body>
void parallel_for(int begin, int end, int threads, Body&& body) {
  const int n = end - begin;
  if (n <= 0) return;
  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    const int lo = begin + static_cast<int>(static_cast<long long>(n) * w / threads);
    const int hi = begin + static_cast<int>(static_cast<long long>(n) * (w + 1) / threads);
    workers.emplace_back([&, lo, hi, w] {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Splits [0, n) into at most `threads` contiguous chunks and runs
/// body(lo, hi) once per chunk. Lets a worker keep per-thread scratch state.
template <typename Body>
void parallel_chunks(int n, int threads, Body&& body) {
  if (n <= 0) return;
  const int workers = std::clamp(threads, 1, n);
  parallel_for(0, workers, workers, [&](int w) {
    const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    body(lo, hi);
  });
}

}  // namespace kkbeam
