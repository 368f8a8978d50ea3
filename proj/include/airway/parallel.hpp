#pragma once

#include <cstddef>
#include <functional>

namespace airway {

// Global worker cap for voxel-parallel loops. 0 resets to hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Splits [begin, end) into contiguous chunks and runs fn(chunk_begin, chunk_end)
// on worker threads. Callers must write disjoint outputs; under that contract the
// result is identical for any worker count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace airway
