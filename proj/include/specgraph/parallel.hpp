#pragma once

#include <cstddef>
#include <functional>

namespace specgraph {

/// Worker-count cap shared by all parallel loops. 0 means "hardware default".
/// Resolution order: explicit set_thread_count, SPECGRAPH_THREADS, hardware.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Static-partition parallel map over [0, n). Each index must write only its
/// own slots; the partitioning is by contiguous chunks, so results do not
/// depend on the worker count. Exceptions from workers are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace specgraph
