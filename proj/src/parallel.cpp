#include "cgsc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cgsc {

namespace {

constexpr std::size_t kMinParallelWork = std::size_t{1} << 20;

std::size_t cap_from_env() {
  std::size_t cap = 0;
  if (const char* env = std::getenv("CGSC_THREADS")) {
    try {
      cap = static_cast<std::size_t>(std::stoul(env));
    } catch (...) {
      cap = 0;
    }
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return cap;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{cap_from_env()};
  return cap;
}

}  // namespace

std::size_t thread_cap() { return cap_storage().load(); }

void set_thread_cap(std::size_t cap) {
  cap_storage().store(cap == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cap);
}

void parallel_for(std::size_t count, std::size_t work,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(count, thread_cap());
  if (workers <= 1 || work < kMinParallelWork) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += workers) body(i);
    });
  for (std::size_t i = 0; i < count; i += workers) body(i);
}

}  // namespace cgsc
