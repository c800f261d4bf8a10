#pragma once

#include <cstddef>
#include <functional>

namespace cavkin {

/// Environment variable that overrides any requested thread count.
inline constexpr const char* kThreadsEnv = "CAVKIN_THREADS";

/// CAVKIN_THREADS if set and positive, else `requested` if positive, else the
/// hardware concurrency (at least 1).
int resolve_thread_count(int requested = 0);

/// Calls body(i) for i in [0, n) on up to `threads` workers. Work items are
/// handed out dynamically, so body must not depend on which thread runs it.
/// The first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace cavkin
