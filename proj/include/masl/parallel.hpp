#pragma once

#include <functional>

namespace masl {

// Global worker count for data-parallel loops. 0 restores the hardware
// default. Loops partition indices into contiguous blocks, so results are
// bit-identical to a sequential run for independent iterations.
void set_thread_count(int n);
int thread_count();

void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace masl
