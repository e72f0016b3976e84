#include "braceforge/linalg.hpp"

#include <algorithm>
#include <string>

namespace braceforge {

FpVector::FpVector(std::uint32_t p, std::vector<std::uint32_t> coords) : p_(p), c_(std::move(coords)) {
  require_prime(p);
  for (auto& x : c_) {
    if (x >= p_) x %= p_;
  }
}

FpVector FpVector::zero(std::uint32_t p, std::uint32_t dim) {
  return FpVector(p, std::vector<std::uint32_t>(dim, 0));
}

FpVector FpVector::unit(std::uint32_t p, std::uint32_t dim, std::uint32_t i) {
  std::vector<std::uint32_t> c(dim, 0);
  c.at(i) = 1;
  return FpVector(p, std::move(c));
}

void require_same_space(const FpVector& a, const FpVector& b) {
  if (a.p() != b.p() || a.dim() != b.dim()) {
    throw InputError("ambient space mismatch: F_" + std::to_string(a.p()) + "^" +
                     std::to_string(a.dim()) + " vs F_" + std::to_string(b.p()) + "^" +
                     std::to_string(b.dim()));
  }
}

FpVector FpVector::operator+(const FpVector& o) const {
  require_same_space(*this, o);
  std::vector<std::uint32_t> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = modp::add(c_[i], o.c_[i], p_);
  return FpVector(p_, std::move(r));
}

FpVector FpVector::operator-(const FpVector& o) const {
  require_same_space(*this, o);
  std::vector<std::uint32_t> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = modp::sub(c_[i], o.c_[i], p_);
  return FpVector(p_, std::move(r));
}

FpVector FpVector::operator-() const {
  std::vector<std::uint32_t> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = modp::neg(c_[i], p_);
  return FpVector(p_, std::move(r));
}

FpVector FpVector::scaled(std::uint32_t alpha) const {
  std::vector<std::uint32_t> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = modp::mul(c_[i], alpha % p_, p_);
  return FpVector(p_, std::move(r));
}

bool FpVector::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](std::uint32_t x) { return x == 0; });
}

std::uint64_t rank_of(std::span<const std::uint32_t> coords, std::span<const std::uint32_t> moduli) {
  if (coords.size() != moduli.size()) throw InputError("rank_of: coordinate/modulus length mismatch");
  std::uint64_t r = 0, weight = 1;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    r += weight * coords[i];
    weight *= moduli[i];
  }
  return r;
}

std::vector<std::uint32_t> unrank(std::uint64_t r, std::span<const std::uint32_t> moduli) {
  std::vector<std::uint32_t> c(moduli.size());
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    c[i] = static_cast<std::uint32_t>(r % moduli[i]);
    r /= moduli[i];
  }
  return c;
}

FpMatrix::FpMatrix(std::uint32_t p, std::uint32_t rows, std::uint32_t cols)
    : p_(p), rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {
  require_prime(p);
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::uint32_t n) {
  FpMatrix m(p, n, n);
  for (std::uint32_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FpVector FpMatrix::apply(const FpVector& v) const {
  if (v.p() != p_ || v.dim() != cols_) throw InputError("matrix/vector shape mismatch");
  std::vector<std::uint32_t> out(rows_, 0);
  apply_into(v.coords(), out);
  return FpVector(p_, std::move(out));
}

void FpMatrix::apply_into(std::span<const std::uint32_t> v, std::span<std::uint32_t> out) const {
  for (std::uint32_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    const std::uint32_t* row = &a_[static_cast<std::size_t>(i) * cols_];
    for (std::uint32_t j = 0; j < cols_; ++j) {
      acc += static_cast<std::uint64_t>(row[j]) * v[j] % p_;
    }
    out[i] = static_cast<std::uint32_t>(acc % p_);
  }
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
  if (p_ != o.p_ || cols_ != o.rows_) throw InputError("matrix product shape mismatch");
  FpMatrix r(p_, rows_, o.cols_);
  for (std::uint32_t i = 0; i < rows_; ++i) {
    for (std::uint32_t k = 0; k < cols_; ++k) {
      std::uint32_t aik = at(i, k);
      if (aik == 0) continue;
      for (std::uint32_t j = 0; j < o.cols_; ++j) {
        r.a_[i * o.cols_ + j] =
            modp::add(r.a_[i * o.cols_ + j], modp::mul(aik, o.at(k, j), p_), p_);
      }
    }
  }
  return r;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
  if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix sum shape mismatch");
  FpMatrix r(p_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = modp::add(a_[i], o.a_[i], p_);
  return r;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const {
  if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix diff shape mismatch");
  FpMatrix r(p_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = modp::sub(a_[i], o.a_[i], p_);
  return r;
}

FpMatrix FpMatrix::scaled(std::uint32_t alpha) const {
  FpMatrix r(p_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = modp::mul(a_[i], alpha % p_, p_);
  return r;
}

}  // namespace braceforge
