#pragma once

#include <cstddef>
#include <functional>

namespace levysid {

/// Environment variable that overrides the worker count.
inline constexpr const char* kWorkerEnvVar = "LEVY_SID_WORKERS";

/// Number of worker threads used by parallel loops. Resolution order:
/// explicit override, then LEVY_SID_WORKERS, then hardware concurrency.
std::size_t worker_count();

/// Overrides the worker count for the whole process; 0 clears the override.
void set_worker_count(std::size_t workers);

/// Runs `task(chunk)` for every chunk in [0, chunks). Chunks are claimed
/// dynamically, so `task` must only write to per-chunk state. If tasks
/// throw, the exception of the lowest-numbered failing chunk is rethrown
/// after all workers join, so errors do not depend on scheduling.
void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& task);

/// Row count per work item in every chunked loop. Fixed so that reductions
/// never depend on the number of workers.
inline constexpr std::size_t kRowChunk = 1u << 15;

inline std::size_t chunk_count(std::size_t rows) { return (rows + kRowChunk - 1) / kRowChunk; }

}  // namespace levysid
