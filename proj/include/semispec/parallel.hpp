#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace semispec {

/// Runs work items [0, n) split into fixed-size blocks. Each block is
/// processed by exactly one worker in item order; block ids are handed to
/// `processBlock(blockIndex, begin, end)`. The block layout is independent
/// of the thread count, so per-block partial results merged in block order
/// give identical output for any number of threads.
inline void parallel_blocks(std::size_t n, std::size_t blockSize, std::size_t nThreads,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& processBlock) {
    if (blockSize == 0) blockSize = 1;
    const std::size_t nBlocks = (n + blockSize - 1) / blockSize;
    if (nThreads <= 1 || nBlocks <= 1) {
        for (std::size_t b = 0; b < nBlocks; ++b)
            processBlock(b, b * blockSize, std::min(n, (b + 1) * blockSize));
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex errorMutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nBlocks) return;
            try {
                processBlock(b, b * blockSize, std::min(n, (b + 1) * blockSize));
            } catch (...) {
                std::lock_guard lock(errorMutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t count = std::min(nThreads, nBlocks);
    pool.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::size_t default_block_size() { return 16; }

}  // namespace semispec
