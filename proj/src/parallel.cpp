#include "levysid/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace levysid {

namespace {

std::atomic<std::size_t> g_override{0};

std::size_t env_workers() {
  const char* value = std::getenv(kWorkerEnvVar);
  if (value == nullptr) return 0;
  std::size_t parsed = 0;
  auto [ptr, ec] = std::from_chars(value, value + std::strlen(value), parsed);
  if (ec != std::errc{} || *ptr != '\0') return 0;
  return parsed;
}

}  // namespace

std::size_t worker_count() {
  if (std::size_t forced = g_override.load(); forced > 0) return forced;
  if (std::size_t env = env_workers(); env > 0) return env;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_worker_count(std::size_t workers) { g_override.store(workers); }

void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& task) {
  if (chunks == 0) return;
  const std::size_t workers = std::min(worker_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) task(c);
    return;
  }

  // Chunks are claimed in increasing order, so every chunk below the lowest
  // failing one has run by the time the pool drains; rethrowing that chunk's
  // error keeps failures independent of scheduling.
  std::atomic<std::size_t> next{0};
  std::size_t failed_chunk = chunks;
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      {
        std::lock_guard lock(error_mutex);
        if (c > failed_chunk) return;
      }
      try {
        task(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (c < failed_chunk) {
          failed_chunk = c;
          error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace levysid
