#pragma once

#include <cstddef>
#include <functional>

namespace costab::par {

/// Process-wide switch between the OpenMP kernels and the serial reference
/// path. The serial path is the semantics; the parallel path must agree
/// bit-for-bit (work items are pure and results are collected by index).
bool enabled();
void set_enabled(bool on);
int worker_count();

/// Runs fn(i) for i in [0, n). Results must be written to preallocated,
/// per-index storage inside fn.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace costab::par
