#include "braceforge/fp.hpp"

#include <string>

namespace braceforge {

namespace {

std::uint64_t pow_mod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 acc = 1, base = a % m;
  while (e) {
    if (e & 1) acc = acc * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(acc);
}

bool miller_rabin(std::uint32_t n, std::uint32_t a) {
  std::uint32_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  std::uint64_t x = pow_mod64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * x) % n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  // Bases 2, 7, 61 are a complete witness set below 2^32.
  for (std::uint32_t a : {2u, 7u, 61u}) {
    if (!miller_rabin(n, a % n == 0 ? 1 : a)) return false;
  }
  return true;
}

void require_prime(std::uint32_t p) {
  thread_local std::uint32_t last_ok = 0;
  if (p == last_ok) return;
  if (p >= (1u << 31) || !is_prime(p)) {
    throw InputError("modulus " + std::to_string(p) + " is not a prime below 2^31");
  }
  last_ok = p;
}

namespace modp {

std::uint32_t pow(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
  return static_cast<std::uint32_t>(pow_mod64(a, e, p));
}

std::uint32_t inv(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw InputError("division by zero in F_" + std::to_string(p));
  return pow(a % p, p - 2, p);
}

}  // namespace modp

FpScalar::FpScalar(std::uint64_t value, std::uint32_t p) {
  require_prime(p);
  p_ = p;
  value_ = static_cast<std::uint32_t>(value % p);
}

namespace {
void require_same_modulus(const FpScalar& a, const FpScalar& b) {
  if (a.modulus() != b.modulus()) {
    throw InputError("mixed moduli: F_" + std::to_string(a.modulus()) + " vs F_" +
                     std::to_string(b.modulus()));
  }
}
}  // namespace

FpScalar FpScalar::operator+(const FpScalar& o) const {
  require_same_modulus(*this, o);
  return FpScalar(modp::add(value_, o.value_, p_), p_);
}

FpScalar FpScalar::operator-(const FpScalar& o) const {
  require_same_modulus(*this, o);
  return FpScalar(modp::sub(value_, o.value_, p_), p_);
}

FpScalar FpScalar::operator*(const FpScalar& o) const {
  require_same_modulus(*this, o);
  return FpScalar(modp::mul(value_, o.value_, p_), p_);
}

FpScalar FpScalar::operator/(const FpScalar& o) const {
  require_same_modulus(*this, o);
  return FpScalar(modp::mul(value_, modp::inv(o.value_, p_), p_), p_);
}

FpScalar FpScalar::operator-() const { return FpScalar(modp::neg(value_, p_), p_); }

FpScalar FpScalar::inv() const { return FpScalar(modp::inv(value_, p_), p_); }

FpScalar FpScalar::pow(std::uint64_t e) const { return FpScalar(modp::pow(value_, e, p_), p_); }

}  // namespace braceforge
