#pragma once

#include <functional>
#include <cstdint>

namespace ksk {

// Global worker cap (CLI --threads / KSK_THREADS). 0 = hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs fn(i) for i in [0, n) on up to max_threads() workers. Blocks until
// done. Chunk assignment is deterministic but callers must not depend on
// execution order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Static block partition: calls fn(begin, end) per block, one block per
// worker. Useful when the caller keeps per-block partial results and merges
// them in block order (reproducible reductions).
void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);
unsigned block_count(std::size_t n);

}  // namespace ksk
