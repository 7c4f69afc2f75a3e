#include "pfd/rng.hpp"

namespace pfd {

namespace {

std::atomic<unsigned> g_threads{0};

}  // namespace

void set_worker_threads(unsigned threads) { g_threads = threads; }

unsigned worker_threads()
{
  const unsigned t = g_threads;
  return t != 0 ? t : std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace pfd
