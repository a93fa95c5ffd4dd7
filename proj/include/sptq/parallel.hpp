#pragma once

#include <cstddef>
#include <functional>

namespace sptq {

// Worker count: min(SPTQ_SIM_THREADS, hardware concurrency), at least 1.
std::size_t thread_cap();

// Index-partitioned loop; f(i) must touch only slot i of any shared output.
// Results are identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace sptq
