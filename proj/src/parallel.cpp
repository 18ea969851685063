#include "xconvex/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace xconvex {

int worker_count() {
  if (const char* env = std::getenv("XCONVEX_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 256) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_blocks(std::size_t n,
                     const std::function<void(int, std::size_t, std::size_t)>& body) {
  int workers = worker_count();
  if (n == 0) return;
  if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);
  if (workers <= 1) {
    body(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::size_t chunk = n / workers, extra = n % workers, begin = 0;
  for (int w = 0; w < workers; ++w) {
    std::size_t len = chunk + (static_cast<std::size_t>(w) < extra ? 1 : 0);
    std::size_t end = begin + len;
    pool.emplace_back([&body, &errors, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace xconvex
