#pragma once

#include <cstddef>
#include <functional>

namespace varfrac {

// Worker count: hardware concurrency, capped by VARFRAC_THREADS when set.
unsigned thread_budget();

// Runs body(i) for i in [0, n) on a small pool pulling indices from a shared
// counter. The first exception thrown is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace varfrac
