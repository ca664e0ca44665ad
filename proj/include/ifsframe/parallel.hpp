#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace ifsframe::detail {

// Splits [0, n) into fixed chunks of `chunk` items and evaluates
// fn(begin, end) for each, concurrently when hardware allows. Results come
// back in chunk order, so a left fold over them does not depend on the thread
// count.
template <class Fn>
auto map_chunks(std::size_t n, std::size_t chunk, Fn fn) {
    using Result = decltype(fn(std::size_t{0}, std::size_t{0}));
    chunk = std::max<std::size_t>(chunk, 1);
    std::size_t count = (n + chunk - 1) / chunk;
    std::vector<Result> out;
    out.reserve(count);
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers == 1 || count <= 1) {
        for (std::size_t c = 0; c < count; ++c) {
            out.push_back(fn(c * chunk, std::min(n, (c + 1) * chunk)));
        }
        return out;
    }
    for (std::size_t first = 0; first < count; first += workers) {
        std::vector<std::future<Result>> batch;
        for (std::size_t c = first; c < std::min(count, first + workers); ++c) {
            batch.push_back(std::async(std::launch::async, fn, c * chunk,
                                       std::min(n, (c + 1) * chunk)));
        }
        for (auto& f : batch) {
            out.push_back(f.get());
        }
    }
    return out;
}

} // namespace ifsframe::detail
