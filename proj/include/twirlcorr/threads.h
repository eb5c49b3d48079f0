#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <functional>
#include <thread>
#include <vector>

namespace twirlcorr {

// Worker count: min(hardware, TWIRLCORR_THREADS if set).
inline int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) {
        hw = 1;
    }
    if (const char* env = std::getenv("TWIRLCORR_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) {
            hw = std::min(hw, cap);
        }
    }
    return hw;
}

// Runs fn(chunk_index, begin, end) over [0, total) split into fixed-size
// chunks. The chunk grid depends only on (total, chunk_size), never on the
// worker count, so per-chunk results are reproducible under any schedule.
inline void parallel_chunks(uint64_t total, uint64_t chunk_size,
                            const std::function<void(uint64_t, uint64_t, uint64_t)>& fn) {
    if (total == 0) {
        return;
    }
    uint64_t n_chunks = (total + chunk_size - 1) / chunk_size;
    int workers = std::min<uint64_t>(worker_count(), n_chunks);
    if (workers <= 1) {
        for (uint64_t c = 0; c < n_chunks; c++) {
            fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; w++) {
        pool.emplace_back([&]() {
            for (;;) {
                uint64_t c = next.fetch_add(1);
                if (c >= n_chunks) {
                    return;
                }
                try {
                    fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                    next.store(n_chunks);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

// Pairwise summation in fixed order; bit-stable regardless of worker count
// as long as the inputs are chunk-indexed.
inline double pairwise_sum(std::vector<double> v) {
    if (v.empty()) {
        return 0.0;
    }
    while (v.size() > 1) {
        size_t half = (v.size() + 1) / 2;
        for (size_t i = 0; i + half < v.size(); i++) {
            v[i] += v[i + half];
        }
        v.resize(half);
    }
    return v[0];
}

}  // namespace twirlcorr
