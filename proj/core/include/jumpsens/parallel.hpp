#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace jumpsens {

// Worker count: explicit request, else JUMPSENS_WORKERS, else the hardware.
// Affects speed only; results are reduced in a fixed order.
inline int effective_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("JUMPSENS_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct McResult {
    std::vector<double> sum, sumsq;
    std::size_t used = 0, excluded = 0;
};

// Runs path_fn(path_index, out_samples) over n_paths paths. path_fn returns
// false to exclude the path. Paths are processed in fixed-size chunks; chunk
// partials are combined pairwise in chunk order, so the reduction is
// bit-identical for any worker count.
inline McResult run_paths(std::size_t n_paths, std::size_t n_quantities, int workers,
                          const std::function<bool(std::size_t, double*)>& path_fn) {
    constexpr std::size_t kChunk = 4096;
    const std::size_t n_chunks = (n_paths + kChunk - 1) / kChunk;

    struct Chunk {
        std::vector<double> sum, sumsq;
        std::size_t used = 0, excluded = 0;
    };
    std::vector<Chunk> chunks(n_chunks);

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    std::atomic<bool> failed{false};

    auto work = [&]() {
        std::vector<double> samples(n_quantities);
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks || failed.load(std::memory_order_relaxed)) return;
            Chunk& chunk = chunks[c];
            chunk.sum.assign(n_quantities, 0.0);
            chunk.sumsq.assign(n_quantities, 0.0);
            const std::size_t lo = c * kChunk;
            const std::size_t hi = std::min(lo + kChunk, n_paths);
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    if (path_fn(i, samples.data())) {
                        ++chunk.used;
                        for (std::size_t q = 0; q < n_quantities; ++q) {
                            chunk.sum[q] += samples[q];
                            chunk.sumsq[q] += samples[q] * samples[q];
                        }
                    } else {
                        ++chunk.excluded;
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    const int n_workers = std::max(1, effective_workers(workers));
    if (n_workers == 1 || n_chunks == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // fixed-order pairwise reduction over chunk partials
    std::vector<Chunk>& layer = chunks;
    std::size_t width = layer.size();
    while (width > 1) {
        const std::size_t half = (width + 1) / 2;
        for (std::size_t i = 0; i + half < width; ++i) {
            Chunk& a = layer[i];
            const Chunk& b = layer[i + half];
            for (std::size_t q = 0; q < n_quantities; ++q) {
                a.sum[q] += b.sum[q];
                a.sumsq[q] += b.sumsq[q];
            }
            a.used += b.used;
            a.excluded += b.excluded;
        }
        width = half;
    }

    McResult out;
    out.sum = std::move(layer[0].sum);
    out.sumsq = std::move(layer[0].sumsq);
    out.used = layer[0].used;
    out.excluded = layer[0].excluded;
    return out;
}

} // namespace jumpsens
