#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace redpath {

/// Replicates are processed in fixed blocks so the block layout, and hence any
/// block-ordered reduction, does not depend on the thread count.
inline constexpr std::int64_t kReplicateBlock = 256;

/// Runs fn(begin, end) for every block of [0, count) on up to `threads`
/// workers and returns the per-block results in block order.
template <typename Fn>
auto run_blocks(std::int64_t count, int threads, Fn fn) {
  using Result = decltype(fn(std::int64_t{0}, std::int64_t{0}));
  const std::int64_t blocks = (count + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<Result> results(static_cast<std::size_t>(blocks));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        const std::int64_t begin = b * kReplicateBlock;
        results[static_cast<std::size_t>(b)] = fn(begin, std::min(count, begin + kReplicateBlock));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = blocks;
      }
    }
  };

  const int n_workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(blocks, 1)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace redpath
