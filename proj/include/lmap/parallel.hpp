#pragma once

namespace lmap {

/// Applies the LMAP_THREADS environment variable (a positive integer) to the
/// OpenMP runtime. Returns the thread count in effect afterwards.
int apply_thread_override();

int max_threads();

}  // namespace lmap
