#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace rbm {

// RMT_THREADS, when set to a positive integer, overrides the requested count.
inline std::size_t resolve_workers(std::size_t requested)
{
    if (const char* env = std::getenv("RMT_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return requested == 0 ? 1 : requested;
}

struct Chunk {
    std::size_t begin = 0;
    std::size_t end = 0;
};

inline std::vector<Chunk> partition(std::size_t total, std::size_t workers)
{
    if (workers == 0) workers = 1;
    std::vector<Chunk> chunks(workers);
    const std::size_t base = total / workers, extra = total % workers;
    std::size_t pos = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        chunks[w] = {pos, pos + len};
        pos += len;
    }
    return chunks;
}

// Runs fn(worker, begin, end) on contiguous ranges; one thread per worker.
template <typename Fn>
void run_partitioned(std::size_t total, std::size_t workers, Fn&& fn)
{
    const auto chunks = partition(total, workers);
    if (chunks.size() == 1) {
        fn(std::size_t{0}, chunks[0].begin, chunks[0].end);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks.size());
    std::vector<std::thread> threads;
    threads.reserve(chunks.size());
    for (std::size_t w = 0; w < chunks.size(); ++w) {
        threads.emplace_back([&, w] {
            try {
                fn(w, chunks[w].begin, chunks[w].end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace rbm
