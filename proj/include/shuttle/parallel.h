// Copyright 2026 The Shuttlesim Authors
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


#ifndef SHUTTLE_PARALLEL_H
#define SHUTTLE_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shuttle {

/// Calls body(k) for k in [0, n) on up to `workers` threads. Indices are handed out in
/// increasing order. The first exception stops further work and is rethrown here.
template <typename F>
void parallel_for(size_t n, int workers, F &&body) {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        while (true) {
            size_t k = next.fetch_add(1);
            if (k >= n) {
                return;
            }
            try {
                body(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n);
                return;
            }
        }
    };
    int count = std::max(1, std::min<int>(workers, static_cast<int>(std::min<size_t>(n, 1 << 16))));
    std::vector<std::thread> pool;
    for (int w = 1; w < count; w++) {
        pool.emplace_back(work);
    }
    work();
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace shuttle

#endif
