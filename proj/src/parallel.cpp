#include "cit/parallel.hpp"

#include <atomic>
#include <mutex>
#include <thread>
#include <vector>

namespace cit::par {

namespace {
std::atomic<int> g_default_threads{0};
}

void set_default_threads(int n) { g_default_threads.store(n < 0 ? 0 : n); }

int default_threads() { return g_default_threads.load(); }

int hardware_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

int effective_threads(int requested) {
  if (requested <= 0) requested = default_threads();
  if (requested <= 0) requested = hardware_threads();
  return requested < 1 ? 1 : requested;
}

void for_blocks(std::size_t nblocks, int nthreads,
                const std::function<void(std::size_t)>& fn) {
  if (nblocks == 0) return;
  const int workers =
      static_cast<int>(std::min<std::size_t>(effective_threads(nthreads), nblocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cit::par
