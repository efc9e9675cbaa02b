// SPDX-License-Identifier: Apache-2.0
//
// metasense: single-antenna THz radar angle estimation with metasurface pairs
// Copyright (C) 2026 The metasense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef METASENSE_PARALLEL_HPP
#define METASENSE_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace metasense
{
    // Runs body(i) for i in [0, count) on up to `threads` workers with static interleaved
    // assignment. Callers write results into per-index slots, so the outcome never depends on the
    // thread count. The first exception thrown by any worker is rethrown on the calling thread.
    template <typename Body>
    void parallel_for(std::size_t count, int threads, Body &&body)
    {
        const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        std::exception_ptr failure;
        std::mutex failure_lock;
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try
                    {
                        for (std::size_t i = w; i < count; i += workers)
                            body(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_lock);
                        if (!failure)
                            failure = std::current_exception();
                    }
                });
        }
        if (failure)
            std::rethrow_exception(failure);
    }
}

#endif
