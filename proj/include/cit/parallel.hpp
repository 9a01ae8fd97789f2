#pragma once

#include <cstddef>
#include <functional>

namespace cit::par {

// Worker cap used when callers do not request an explicit count.
// 0 means "use hardware concurrency".
void set_default_threads(int n);
int default_threads();

int hardware_threads();

// Resolve a requested count (0 -> default) to a usable worker count >= 1.
int effective_threads(int requested = 0);

// Run fn(b) for every b in [0, nblocks). Blocks are claimed dynamically but
// any result written by block index is independent of the worker count, so
// deterministic reductions stay deterministic. Exceptions propagate.
void for_blocks(std::size_t nblocks, int nthreads,
                const std::function<void(std::size_t)>& fn);

}  // namespace cit::par
