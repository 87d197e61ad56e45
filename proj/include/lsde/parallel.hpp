#pragma once

#include <cstddef>
#include <functional>

namespace lsde {

enum class Execution { Serial, Parallel };

// Threads available to parallel loops: OpenMP maximum, capped by LIE_SDE_THREADS when set.
int thread_cap();

// Runs body(i) for i in [0, n). Parallel execution uses OpenMP with a static
// schedule; each index must write only to its own output slot. The first
// exception thrown by any body is rethrown after the loop.
void for_each_index(std::size_t n, Execution execution, const std::function<void(std::size_t)>& body);

}  // namespace lsde
