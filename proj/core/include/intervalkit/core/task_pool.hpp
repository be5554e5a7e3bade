#pragma once

#include <cstddef>
#include <functional>

namespace ik {

/// Number of worker threads to use when the caller asks for `requested`
/// (0 means one per hardware thread).
std::size_t resolve_jobs(std::size_t requested);

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Tasks are handed
/// out in index order; callers write results into slot i so the merged output
/// never depends on scheduling. The first exception thrown by any task is
/// rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace ik
