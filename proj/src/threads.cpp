#include "ksk/threads.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace ksk {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned n) { g_max_threads.store(n); }

unsigned max_threads() {
    unsigned n = g_max_threads.load();
    if (n == 0) {
        n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned nt = max_threads();
    if (nt <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

unsigned block_count(std::size_t n) {
    unsigned nt = max_threads();
    // fixed block structure independent of the actual worker count, so that
    // per-block partials merged in block order give identical results
    unsigned blocks = 64;
    if (n < blocks) blocks = static_cast<unsigned>(n ? n : 1);
    (void)nt;
    return blocks;
}

void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    unsigned blocks = block_count(n);
    std::size_t per = (n + blocks - 1) / blocks;
    parallel_for(blocks, [&](std::size_t b) {
        std::size_t lo = b * per;
        std::size_t hi = lo + per < n ? lo + per : n;
        if (lo < hi) fn(b, lo, hi);
    });
}

}  // namespace ksk
