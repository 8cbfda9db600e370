#pragma once

#include <functional>

namespace suris {

/// Worker count actually used: `requested` if positive, else the
/// SURIS_LAB_THREADS environment variable if set and positive, else the
/// hardware concurrency (at least 1).
int effective_threads(int requested = 0);

/// Runs fn(i) for every i in [0, n) across effective_threads(threads)
/// workers and blocks until all complete.  fn must be safe to call
/// concurrently for distinct i; the first exception thrown (if any) is
/// rethrown on the calling thread after the join.
void parallel_for(long n, const std::function<void(long)>& fn, int threads = 0);

}  // namespace suris
