#pragma once

#include <cstddef>
#include <functional>

namespace retsurv {

// Effective worker count: hardware concurrency, overridable by
// set_worker_cap() and the RETSURV_MAX_WORKERS environment variable
// (the smaller wins). Always at least 1.
int worker_count();
void set_worker_cap(int cap);

// Splits [begin, end) into contiguous chunks, one per worker, and runs
// body(chunk_begin, chunk_end) on each. The partitioning is a pure
// function of (end - begin, worker_count()); bodies must write only to
// disjoint state so that results cannot depend on scheduling.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace retsurv
