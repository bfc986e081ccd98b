#pragma once

#include <cstddef>
#include <functional>

namespace sugar {

/// Worker cap for row-parallel loops. Defaults to $SUGAR_THREADS when set,
/// otherwise the hardware concurrency. Values < 1 are clamped to 1.
std::size_t max_threads();
void set_max_threads(std::size_t n);

/// Runs body(begin, end) over a static partition of [0, n). Each index is
/// visited exactly once and the partition depends only on n and the worker
/// count, so per-index results never depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sugar
