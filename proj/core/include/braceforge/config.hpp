#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace braceforge {

/// Deterministic run configuration. Identical config + inputs must give
/// byte-identical outputs, whatever BRACEFORGE_THREADS says.
struct RunConfig {
  std::uint64_t seed = 0x5EED;
  std::uint64_t sample_count = 10000;
  std::uint64_t exhaustive_cap = 100000;  // elements enumerated exhaustively
  bool allow_sampled = true;  // permit labeled sampled modes above the cap
  bool force = false;         // exploration mode: report violations, don't throw
};

/// Seeded splitmix64 stream. Small, portable, and stable across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, n). n > 0.
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Derive an independent stream for a named purpose from the run seed.
Rng derived_rng(const RunConfig& cfg, std::string_view tag);

/// Worker count: BRACEFORGE_THREADS if set and > 0, else hardware concurrency.
unsigned worker_threads();

/// Run fn over [0, n) split into contiguous chunks, one per worker.
/// Results must be written to per-index slots; the split is deterministic
/// but callers must not depend on execution order.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace braceforge
