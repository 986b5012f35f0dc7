#pragma once

#include <functional>

namespace hppseg {

int hardware_threads();

// Runs fn(i) for i in [0, n) on a static block partition across `threads`
// workers (0 = hardware concurrency). Output written by distinct indices is
// identical for any thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace hppseg
