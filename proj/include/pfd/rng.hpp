#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace pfd {

/// Deterministic random stream. Wraps mt19937_64 and converts to doubles with
/// a fixed 53-bit mapping so sequences do not depend on the standard library's
/// distribution implementations.
class RngStream
{
public:
  explicit RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Substream `index` of `seed`. Substreams of one seed are independent and
  /// reproducible regardless of which thread consumes them.
  static RngStream substream(std::uint64_t seed, std::uint64_t index)
  {
    return RngStream(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t bits() { return engine_(); }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n)
  {
    // Lemire-free rejection; n is small everywhere we use it.
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

private:
  static std::uint64_t mix(std::uint64_t z)
  {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

/// Number of worker threads used by the experiment harness. Zero means
/// hardware concurrency.
void set_worker_threads(unsigned threads);
unsigned worker_threads();

/// Runs `task(i)` for i in [0, count) on the worker pool and returns the
/// results in index order. Results never depend on the thread count.
template <typename Result>
std::vector<Result> parallel_map(std::size_t count, const std::function<Result(std::size_t)> &task)
{
  std::vector<Result> results(count);
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, worker_threads()), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      results[i] = task(i);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) {
          results[i] = task(i);
        }
      } catch (...) {
        errors[t] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto &th : pool) {
    th.join();
  }
  for (auto &e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return results;
}

}  // namespace pfd
