#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "braceforge/subspace.hpp"

namespace braceforge {

enum class ChainKind { left, right, strong, prelie_power };

/// A descending nilpotency chain. levels[i] holds the (i+1)-st member, so
/// levels[0] is the full space and index k means levels[k-1] is zero.
struct ChainReport {
  ChainKind kind;
  std::vector<FpSubspace> levels;
  /// Smallest k with the k-th member zero; nullopt if the chain stabilized
  /// above zero or hit the step cap.
  std::optional<std::uint32_t> index;
  /// True when any level was computed from sampled set arguments, i.e. the
  /// levels are certified under-approximations rather than exact.
  bool sampled = false;
  /// True when the chain stopped because two consecutive levels were equal.
  bool stabilized = false;

  std::vector<std::uint32_t> dims() const {
    std::vector<std::uint32_t> d;
    d.reserve(levels.size());
    for (const auto& s : levels) d.push_back(s.dim());
    return d;
  }
};

}  // namespace braceforge
