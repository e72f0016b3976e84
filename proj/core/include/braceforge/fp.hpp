#pragma once

#include <cstdint>

#include "braceforge/errors.hpp"

namespace braceforge {

/// Deterministic primality test for 32-bit integers.
bool is_prime(std::uint32_t n);

/// Throws InputError unless p is prime. Cached per thread: validating the
/// same modulus repeatedly is the common case.
void require_prime(std::uint32_t p);

/// Exact arithmetic on residues in [0, p), p prime, p < 2^31.
namespace modp {

inline std::uint32_t add(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  std::uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline std::uint32_t sub(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return a >= b ? a - b : a + p - b;
}

inline std::uint32_t neg(std::uint32_t a, std::uint32_t p) { return a == 0 ? 0 : p - a; }

inline std::uint32_t mul(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p);
}

std::uint32_t pow(std::uint32_t a, std::uint64_t e, std::uint32_t p);

/// Inverse of a nonzero residue. Throws InputError on zero input.
std::uint32_t inv(std::uint32_t a, std::uint32_t p);

}  // namespace modp

/// A scalar of F_p: a residue in [0, p) together with its modulus.
/// Mixed-modulus arithmetic is an input error. The modulus is validated
/// prime on construction.
class FpScalar {
 public:
  FpScalar(std::uint64_t value, std::uint32_t p);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return p_; }

  FpScalar operator+(const FpScalar& o) const;
  FpScalar operator-(const FpScalar& o) const;
  FpScalar operator*(const FpScalar& o) const;
  FpScalar operator/(const FpScalar& o) const;  // division by zero throws
  FpScalar operator-() const;
  FpScalar inv() const;
  FpScalar pow(std::uint64_t e) const;

  bool operator==(const FpScalar& o) const = default;

 private:
  std::uint32_t value_;
  std::uint32_t p_;
};

}  // namespace braceforge
