#pragma once

#include <cstddef>
#include <functional>

namespace novikov {

/// Worker cap: NOVIKOV_THREADS if set and positive, otherwise hardware concurrency.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are disjoint,
/// so pointwise loops give bit-identical results for any worker count. The first
/// exception thrown by a chunk is rethrown after all chunks finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 8192);

}  // namespace novikov
