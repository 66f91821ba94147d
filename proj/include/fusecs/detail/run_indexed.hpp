// SPDX-License-Identifier: Apache-2.0
//
// fusecs: fused compressed sensing over fusion frames
// Copyright (C) 2026 The fusecs authors
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

#ifndef FUSECS_DETAIL_RUN_INDEXED_HPP
#define FUSECS_DETAIL_RUN_INDEXED_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>

namespace fusecs
{

template <class T>
std::vector<T> run_indexed(int count, int jobs, const std::function<T(int)> &fn)
{
    const auto n = static_cast<std::size_t>(std::max(count, 0));
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++)
        {
            try
            {
                slots[i].emplace(fn(static_cast<int>(i)));
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto &t : pool)
        t.join();
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    std::vector<T> out;
    out.reserve(n);
    for (auto &s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace fusecs

#endif
