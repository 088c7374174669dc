#pragma once

#include <cstddef>
#include <functional>

namespace lhunt {

// Worker count: HUNT_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

// Runs body(begin, end) over [0, n) split into contiguous chunks, one per
// worker. Chunk boundaries depend only on n and the worker count, and callers
// write results into per-index slots, so output is independent of scheduling.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace lhunt
