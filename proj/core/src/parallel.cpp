#include "tms/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace tms {
namespace {
std::atomic<int> g_workers{1};
}

int worker_count() { return g_workers.load(); }

void set_worker_count(int workers) {
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_workers.store(workers);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, worker_count()));
  if (workers == 1 || n < 2 * workers) {
    body(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    auto run = [&](std::size_t w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(run, w);
    run(0);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace tms
