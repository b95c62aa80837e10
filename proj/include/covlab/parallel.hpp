#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "covlab/rng.hpp"

namespace covlab {

/// Trials per RNG block. Block b always draws from base.split(b), so results
/// do not depend on how blocks are distributed over workers.
inline constexpr std::size_t kTrialsPerBlock = 4096;

struct ExecPolicy {
    unsigned workers = 1;
};

/// Runs `body(rng, count, acc)` over fixed-size blocks of `trials` and merges
/// the per-block accumulators in block order.
template <class Acc, class Body>
Acc run_blocks(std::size_t trials, const RngStream& base, ExecPolicy exec, Body body) {
    const std::size_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
    std::vector<Acc> partial(blocks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= blocks) return;
            try {
                RngStream rng = base.split(b);
                const std::size_t count = std::min(kTrialsPerBlock, trials - b * kTrialsPerBlock);
                body(rng, count, partial[b]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(blocks);
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(exec.workers, static_cast<unsigned>(blocks)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    Acc total{};
    for (const Acc& p : partial) total.merge(p);
    return total;
}

inline unsigned default_workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace covlab
