#include "braceforge/config.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace braceforge {

Rng derived_rng(const RunConfig& cfg, std::string_view tag) {
  // FNV-1a over the tag, mixed into the run seed.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return Rng(cfg.seed ^ h);
}

unsigned worker_threads() {
  if (const char* env = std::getenv("BRACEFORGE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  unsigned workers = worker_threads();
  if (n == 0) return;
  if (workers <= 1 || n < 2 * workers) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t begin = static_cast<std::size_t>(w) * chunk;
    if (begin >= n) break;
    std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back(fn, begin, end);
  }
  for (auto& t : pool) t.join();
}

}  // namespace braceforge
