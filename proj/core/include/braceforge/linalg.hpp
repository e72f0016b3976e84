#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "braceforge/fp.hpp"

namespace braceforge {

/// Coordinate vector over F_p. Immutable after construction; every operation
/// returns a fresh value, so vectors can be shared freely between threads.
class FpVector {
 public:
  FpVector(std::uint32_t p, std::vector<std::uint32_t> coords);
  static FpVector zero(std::uint32_t p, std::uint32_t dim);
  static FpVector unit(std::uint32_t p, std::uint32_t dim, std::uint32_t i);

  std::uint32_t p() const { return p_; }
  std::uint32_t dim() const { return static_cast<std::uint32_t>(c_.size()); }
  std::uint32_t operator[](std::size_t i) const { return c_[i]; }
  std::span<const std::uint32_t> coords() const { return c_; }

  FpVector operator+(const FpVector& o) const;
  FpVector operator-(const FpVector& o) const;
  FpVector operator-() const;
  FpVector scaled(std::uint32_t alpha) const;

  bool is_zero() const;
  bool operator==(const FpVector& o) const = default;

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> c_;
};

/// Throws InputError unless a and b live in the same F_p^n.
void require_same_space(const FpVector& a, const FpVector& b);

/// Mixed-radix rank of a coordinate tuple, least-significant coordinate
/// first. moduli[i] is the modulus of coordinate i. Total size must fit u64.
std::uint64_t rank_of(std::span<const std::uint32_t> coords, std::span<const std::uint32_t> moduli);
std::vector<std::uint32_t> unrank(std::uint64_t r, std::span<const std::uint32_t> moduli);

/// Dense rows x cols matrix over F_p. Used for left-multiplication operators
/// and basis-change maps; mutable in builder style, value-semantic otherwise.
class FpMatrix {
 public:
  FpMatrix(std::uint32_t p, std::uint32_t rows, std::uint32_t cols);
  static FpMatrix identity(std::uint32_t p, std::uint32_t n);

  std::uint32_t p() const { return p_; }
  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }

  std::uint32_t at(std::uint32_t i, std::uint32_t j) const { return a_[i * cols_ + j]; }
  void set(std::uint32_t i, std::uint32_t j, std::uint32_t v) { a_[i * cols_ + j] = v % p_; }

  FpVector apply(const FpVector& v) const;
  void apply_into(std::span<const std::uint32_t> v, std::span<std::uint32_t> out) const;
  FpMatrix operator*(const FpMatrix& o) const;
  FpMatrix operator+(const FpMatrix& o) const;
  FpMatrix operator-(const FpMatrix& o) const;
  FpMatrix scaled(std::uint32_t alpha) const;

  bool operator==(const FpMatrix& o) const = default;

 private:
  std::uint32_t p_, rows_, cols_;
  std::vector<std::uint32_t> a_;
};

}  // namespace braceforge
