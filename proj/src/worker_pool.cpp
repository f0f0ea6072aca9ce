// SPDX-License-Identifier: Apache-2.0
#include "lodgs/worker_pool.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <stdexcept>

namespace lodgs {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Chunk w of [begin, end) split into n near-equal contiguous pieces.
std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t begin, std::size_t end,
                                                 unsigned n, unsigned w) {
    const std::size_t len = end - begin;
    const std::size_t lo = begin + len * w / n;
    const std::size_t hi = begin + len * (w + 1) / n;
    return {lo, hi};
}

}  // namespace

WorkerPool::WorkerPool(unsigned workers) : workers_(workers) {
    if (workers == 0) throw std::invalid_argument("WorkerPool: workers must be >= 1");
    worker_ms_.resize(workers, 0.0);
    threads_.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w)
        threads_.emplace_back([this, w] { worker_loop(w); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stopping_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::worker_loop(unsigned worker) {
    std::uint64_t seen = 0;
    for (;;) {
        const ChunkFn* fn = nullptr;
        std::size_t begin = 0, end = 0;
        {
            std::unique_lock<std::mutex> lock(mutex_);
            start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
            if (stopping_) return;
            seen = generation_;
            fn = fn_;
            begin = begin_;
            end = end_;
        }
        const auto t0 = Clock::now();
        auto [lo, hi] = chunk_bounds(begin, end, workers_, worker);
        if (lo < hi) (*fn)(lo, hi, worker);
        const double elapsed = ms_since(t0);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            worker_ms_[worker] = elapsed;
            if (--pending_ == 0) done_cv_.notify_all();
        }
    }
}

WorkerPool::RunStats WorkerPool::run(std::size_t begin, std::size_t end, const ChunkFn& fn) {
    const auto t0 = Clock::now();
    RunStats stats;
    if (workers_ == 1) {
        if (begin < end) fn(begin, end, 0);
        stats.wall_ms = ms_since(t0);
        stats.calc_ms = stats.wall_ms;
        return stats;
    }

    {
        std::lock_guard<std::mutex> lock(mutex_);
        fn_ = &fn;
        begin_ = begin;
        end_ = end;
        pending_ = workers_ - 1;
        ++generation_;
    }
    start_cv_.notify_all();

    const auto c0 = Clock::now();
    auto [lo, hi] = chunk_bounds(begin, end, workers_, 0);
    if (lo < hi) fn(lo, hi, 0);
    {
        std::unique_lock<std::mutex> lock(mutex_);
        worker_ms_[0] = std::chrono::duration<double, std::milli>(Clock::now() - c0).count();
        done_cv_.wait(lock, [&] { return pending_ == 0; });
        for (double ms : worker_ms_) stats.calc_ms = std::max(stats.calc_ms, ms);
    }
    stats.wall_ms = ms_since(t0);
    return stats;
}

WorkerPool& pool_for(unsigned workers) {
    static std::mutex registry_mutex;
    static std::map<unsigned, std::unique_ptr<WorkerPool>> registry;
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto& slot = registry[workers];
    if (!slot) slot = std::make_unique<WorkerPool>(workers);
    return *slot;
}

}  // namespace lodgs
