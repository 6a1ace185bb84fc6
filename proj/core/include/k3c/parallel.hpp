#pragma once

#include <cstddef>
#include <functional>

namespace k3c {

// Worker count: K3C_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int thread_count();

// Runs body(i) for i in [0, n). Each index must write only its own output
// slot, so results do not depend on scheduling. The exception raised at the
// lowest failing index is rethrown.
void parallel_for(std::size_t n, std::function<void(std::size_t)> const& body);

}  // namespace k3c
