#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fgerm
{

/// out[i] = fn(i) for i < count, spread over `jobs` threads. Results land in
/// index order, so callers that reduce them sequentially stay deterministic.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, std::size_t jobs, Fn fn)
{
    std::vector<T> out(count);
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) {
        threads.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += jobs) {
                    out[i] = fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &th : threads) {
        th.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

} // namespace fgerm
