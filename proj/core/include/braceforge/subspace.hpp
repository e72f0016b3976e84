#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "braceforge/linalg.hpp"

namespace braceforge {

/// A subspace of F_p^n held as a reduced row-echelon basis. Additive
/// subgroups of F_p^n coincide with subspaces (a scalar multiple is a
/// repeated sum), so this is the universal container for chains, ideals and
/// spans. The representation is canonical: two subspaces are equal iff their
/// stored bases are identical row lists.
class FpSubspace {
 public:
  static FpSubspace zero(std::uint32_t p, std::uint32_t ambient_dim);
  static FpSubspace full(std::uint32_t p, std::uint32_t ambient_dim);

  std::uint32_t p() const { return p_; }
  std::uint32_t ambient_dim() const { return ambient_; }
  std::uint32_t dim() const { return static_cast<std::uint32_t>(rows_.size()); }

  /// Basis rows in reduced row-echelon form, pivots strictly increasing.
  const std::vector<std::vector<std::uint32_t>>& rows() const { return rows_; }
  FpVector basis_vector(std::size_t i) const;

  bool contains(const FpVector& v) const;
  bool contains(std::span<const std::uint32_t> coords) const;
  bool contains_subspace(const FpSubspace& other) const;
  bool operator==(const FpSubspace& o) const = default;

  FpSubspace sum(const FpSubspace& other) const;

  /// Number of elements, p^dim. Throws ResourceError beyond 2^62.
  std::uint64_t element_count() const;

  /// Visit every element exactly once, coefficient tuples in mixed-radix
  /// order. The visited buffer is reused; copy it if you keep it.
  void for_each_element(const std::function<void(std::span<const std::uint32_t>)>& fn) const;

  /// Coordinates of a member vector with respect to the basis rows, or
  /// nullopt if v is not in the subspace.
  std::optional<std::vector<std::uint32_t>> coordinates_of(std::span<const std::uint32_t> v) const;

 private:
  friend class SpanBuilder;
  FpSubspace(std::uint32_t p, std::uint32_t ambient) : p_(p), ambient_(ambient) {}

  std::uint32_t p_ = 0;
  std::uint32_t ambient_ = 0;
  std::vector<std::vector<std::uint32_t>> rows_;  // RREF, sorted by pivot
  std::vector<std::uint32_t> pivots_;
};

/// Incremental span accumulator. add() keeps the rows in reduced
/// row-echelon form, so build() is O(1) and canonical.
class SpanBuilder {
 public:
  SpanBuilder(std::uint32_t p, std::uint32_t ambient_dim);
  explicit SpanBuilder(const FpSubspace& start);

  /// Returns true when the vector increased the rank.
  bool add(std::span<const std::uint32_t> v);
  bool add(const FpVector& v);

  std::uint32_t rank() const { return static_cast<std::uint32_t>(rows_.size()); }
  std::uint32_t ambient_dim() const { return ambient_; }
  bool full_rank() const { return rank() == ambient_; }
  bool contains(std::span<const std::uint32_t> v) const;

  FpSubspace build() const;

 private:
  std::uint32_t p_, ambient_;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::uint32_t> pivots_;
};

/// Canonical span of a list of vectors; span of the empty list is the zero
/// subspace (ambient data must then be supplied by the overload below).
FpSubspace span(std::span<const FpVector> vectors);
FpSubspace span(std::uint32_t p, std::uint32_t ambient_dim, std::span<const FpVector> vectors);

/// Number of subspaces of F_p^n (sum of Gaussian binomials). Throws
/// ResourceError naming `cap` when the count exceeds it.
std::uint64_t subspace_count(std::uint32_t p, std::uint32_t n, std::uint64_t cap);

/// Every subspace of F_p^n exactly once: dimension ascending, then
/// lexicographic on the flattened canonical basis.
void for_each_subspace(std::uint32_t p, std::uint32_t n, std::uint64_t cap,
                       const std::function<void(const FpSubspace&)>& fn);
std::vector<FpSubspace> enumerate_subspaces(std::uint32_t p, std::uint32_t n, std::uint64_t cap);

}  // namespace braceforge
