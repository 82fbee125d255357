#ifndef CONGREL_PARALLEL_HPP
#define CONGREL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace congrel {

inline std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs)
    return jobs;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Splits [0, count) into fixed-size chunks and evaluates f(begin, end) for
/// each on up to `jobs` threads. Results come back in chunk order, so the
/// merged output does not depend on the number of workers.
template <class Result, class F>
std::vector<Result> parallel_chunks(std::size_t count, std::size_t chunk, std::size_t jobs, F &&f) {
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t nchunks = (count + chunk - 1) / chunk;
  std::vector<Result> results(nchunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks)
        return;
      try {
        results[c] = f(c * chunk, std::min(count, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next.store(nchunks);
        return;
      }
    }
  };

  const std::size_t workers = std::min(resolve_jobs(jobs), nchunks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i)
      pool.emplace_back(worker);
  }
  if (error)
    std::rethrow_exception(error);
  return results;
}

} // namespace congrel

#endif // CONGREL_PARALLEL_HPP
