#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "braceforge/chain.hpp"
#include "braceforge/linalg.hpp"
#include "braceforge/subspace.hpp"

namespace braceforge {

/// First basis triple (e_i, e_j, e_k) violating the defining identity.
struct IdentityViolation {
  std::uint32_t i, j, k;
};

/// Element-level identity violation found by sampling.
struct ElementIdentityViolation {
  FpVector x, y, z;
};

/// A finite-dimensional pre-Lie algebra over F_p given by structure
/// constants: e_i · e_j = sum_k c[i][j][k] e_k. Candidates coming out of the
/// classification enumerators may fail the defining identity; construction
/// therefore does not check it. identity_verified() records whether
/// check_identity() has passed.
class PreLieAlgebra {
 public:
  /// c is the flattened n*n*n array, index ((i*n)+j)*n+k.
  PreLieAlgebra(std::uint32_t p, std::uint32_t dim, std::vector<std::uint32_t> c);

  static PreLieAlgebra zero(std::uint32_t p, std::uint32_t dim);
  /// F_p[t]t/(t^m): basis t, t^2, ..., t^{m-1}, associative product.
  static PreLieAlgebra truncated_polynomial(std::uint32_t p, std::uint32_t m);

  std::uint32_t p() const { return p_; }
  std::uint32_t dim() const { return n_; }
  std::span<const std::uint32_t> constants() const { return c_; }
  std::span<const std::uint32_t> basis_product(std::uint32_t i, std::uint32_t j) const {
    return std::span<const std::uint32_t>(c_).subspan((static_cast<std::size_t>(i) * n_ + j) * n_, n_);
  }

  /// Bilinear extension of the structure constants.
  FpVector multiply(const FpVector& u, const FpVector& v) const;

  /// Matrix of b -> a·b.
  FpMatrix left_mult_matrix(const FpVector& a) const;
  FpMatrix left_mult_matrix(std::span<const std::uint32_t> a) const;

  /// The identity (xy)z - x(yz) = (yx)z - y(xz) on all basis triples.
  /// Trilinearity of both sides makes basis triples sufficient.
  std::optional<IdentityViolation> check_identity() const;
  /// Seeded element-level spot check of the same identity.
  std::optional<ElementIdentityViolation> check_identity_sampled(std::uint64_t count,
                                                                 std::uint64_t seed) const;
  bool identity_verified() const { return identity_verified_; }

  /// Chain A^{i+1} = sum_j A^j · A^{i+1-j}; index is the nilpotency index
  /// (smallest k with every k-fold product zero). Capped at 2*dim+2 steps.
  ChainReport power_chain() const;

  /// Smallest subspace containing x and closed under the product.
  FpSubspace generated_by(const FpVector& x) const;

  bool operator==(const PreLieAlgebra& o) const {
    return p_ == o.p_ && n_ == o.n_ && c_ == o.c_;
  }

 private:
  std::uint32_t p_, n_;
  std::vector<std::uint32_t> c_;
  mutable bool identity_verified_ = false;
};

}  // namespace braceforge
