// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lodgs {

/// Fixed-size pool running static contiguous partitions of an index range.
///
/// One run() is one data-parallel pass followed by a full join; callers count
/// those joins as their synchronization barriers. Worker w always receives the
/// w-th contiguous chunk, and chunks never overlap, so any write-once output
/// indexed by element is identical for every pool size.
class WorkerPool {
public:
    // fn(begin, end, worker) is invoked for each non-empty chunk.
    using ChunkFn = std::function<void(std::size_t, std::size_t, unsigned)>;

    struct RunStats {
        double wall_ms = 0.0;  // dispatch to last-worker-done
        double calc_ms = 0.0;  // longest single worker duration
    };

    explicit WorkerPool(unsigned workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    unsigned size() const { return workers_; }

    // Blocks until every chunk finished. The calling thread runs chunk 0.
    RunStats run(std::size_t begin, std::size_t end, const ChunkFn& fn);

private:
    void worker_loop(unsigned worker);

    unsigned workers_;
    std::vector<std::thread> threads_;

    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    std::uint64_t generation_ = 0;
    unsigned pending_ = 0;
    bool stopping_ = false;

    const ChunkFn* fn_ = nullptr;
    std::size_t begin_ = 0, end_ = 0;
    std::vector<double> worker_ms_;
};

/// Process-wide pool reuse so repeated filter/render calls with the same
/// --threads value do not respawn threads (barrier cost stays realistic).
WorkerPool& pool_for(unsigned workers);

}  // namespace lodgs
