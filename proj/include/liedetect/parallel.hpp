#pragma once

#include <cstddef>
#include <functional>

namespace liedetect {

// Cap on worker threads used by the library; 0 means "all hardware threads".
void set_thread_limit(unsigned limit);
unsigned thread_limit();

// Runs fn(i) for i in [0, count). Work is split into contiguous chunks, so results
// written to per-index slots are identical to a serial run.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace liedetect
