#pragma once
// Deterministic parallel helpers. Work is cut into fixed-size blocks whose
// boundaries do not depend on the thread count; per-block results are
// combined in block index order. Any reduction that is exact per block and
// folded in that order yields identical output for 1 or N threads.

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace corex {

inline constexpr std::size_t kDefaultBlock = 8192;

// Runs fn(block_index, begin, end) over [0, n) cut into fixed-size blocks.
// Blocks are claimed dynamically but each call sees a fixed range, so any
// per-block output is schedule-independent.
inline void for_each_block(std::size_t n, int threads,
                           const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                           std::size_t block = kDefaultBlock) {
    if (n == 0) return;
    std::size_t n_blocks = (n + block - 1) / block;
    if (threads <= 1 || n_blocks == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b, b * block, std::min(n, (b + 1) * block));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            fn(b, b * block, std::min(n, (b + 1) * block));
        }
    };
    std::vector<std::thread> pool;
    int n_threads = std::min<std::size_t>(std::size_t(threads), n_blocks);
    pool.reserve(std::size_t(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Block-reduced accumulation: partials[b] is produced independently per
// block, then folded left-to-right. The fold order is fixed by block index,
// never by completion order.
template <typename Partial, typename MakeFn, typename FoldFn>
Partial block_reduce(std::size_t n, int threads, Partial init, MakeFn make_block,
                     FoldFn fold, std::size_t block = kDefaultBlock) {
    std::size_t n_blocks = n == 0 ? 0 : (n + block - 1) / block;
    std::vector<Partial> partials(n_blocks);
    for_each_block(n, threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        partials[b] = make_block(lo, hi);
    }, block);
    Partial acc = std::move(init);
    for (std::size_t b = 0; b < n_blocks; ++b) acc = fold(std::move(acc), std::move(partials[b]));
    return acc;
}

}  // namespace corex
