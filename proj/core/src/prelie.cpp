#include "braceforge/prelie.hpp"

#include <string>

#include "braceforge/config.hpp"

namespace braceforge {

PreLieAlgebra::PreLieAlgebra(std::uint32_t p, std::uint32_t dim, std::vector<std::uint32_t> c)
    : p_(p), n_(dim), c_(std::move(c)) {
  require_prime(p);
  if (n_ == 0) throw InputError("algebra dimension must be positive");
  if (c_.size() != static_cast<std::size_t>(n_) * n_ * n_) {
    throw InputError("structure constants: expected " + std::to_string(n_) + "^3 entries, got " +
                     std::to_string(c_.size()));
  }
  for (auto& x : c_) {
    if (x >= p_) x %= p_;
  }
}

PreLieAlgebra PreLieAlgebra::zero(std::uint32_t p, std::uint32_t dim) {
  return PreLieAlgebra(p, dim, std::vector<std::uint32_t>(static_cast<std::size_t>(dim) * dim * dim, 0));
}

PreLieAlgebra PreLieAlgebra::truncated_polynomial(std::uint32_t p, std::uint32_t m) {
  if (m < 2) throw InputError("truncated_polynomial needs m >= 2");
  std::uint32_t n = m - 1;  // basis t, t^2, ..., t^{m-1}
  std::vector<std::uint32_t> c(static_cast<std::size_t>(n) * n * n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      std::uint32_t deg = i + j + 2;  // t^{i+1} * t^{j+1}
      if (deg <= n) c[(static_cast<std::size_t>(i) * n + j) * n + (deg - 1)] = 1;
    }
  }
  return PreLieAlgebra(p, n, std::move(c));
}

FpVector PreLieAlgebra::multiply(const FpVector& u, const FpVector& v) const {
  if (u.p() != p_ || u.dim() != n_ || v.p() != p_ || v.dim() != n_) {
    throw InputError("multiply: ambient mismatch");
  }
  std::vector<std::uint32_t> out(n_, 0);
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (u[i] == 0) continue;
    for (std::uint32_t j = 0; j < n_; ++j) {
      if (v[j] == 0) continue;
      std::uint32_t w = modp::mul(u[i], v[j], p_);
      auto cij = basis_product(i, j);
      for (std::uint32_t k = 0; k < n_; ++k) {
        out[k] = modp::add(out[k], modp::mul(w, cij[k], p_), p_);
      }
    }
  }
  return FpVector(p_, std::move(out));
}

FpMatrix PreLieAlgebra::left_mult_matrix(const FpVector& a) const {
  if (a.p() != p_ || a.dim() != n_) throw InputError("left_mult_matrix: ambient mismatch");
  return left_mult_matrix(a.coords());
}

FpMatrix PreLieAlgebra::left_mult_matrix(std::span<const std::uint32_t> a) const {
  FpMatrix m(p_, n_, n_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (std::uint32_t j = 0; j < n_; ++j) {
      auto cij = basis_product(i, j);
      for (std::uint32_t k = 0; k < n_; ++k) {
        if (cij[k] == 0) continue;
        m.set(k, j, modp::add(m.at(k, j), modp::mul(a[i], cij[k], p_), p_));
      }
    }
  }
  return m;
}

std::optional<IdentityViolation> PreLieAlgebra::check_identity() const {
  for (std::uint32_t i = 0; i < n_; ++i) {
    FpVector ei = FpVector::unit(p_, n_, i);
    for (std::uint32_t j = 0; j < n_; ++j) {
      FpVector ej = FpVector::unit(p_, n_, j);
      FpVector eij = multiply(ei, ej);
      FpVector eji = multiply(ej, ei);
      for (std::uint32_t k = 0; k < n_; ++k) {
        FpVector ek = FpVector::unit(p_, n_, k);
        FpVector lhs = multiply(eij, ek) - multiply(ei, multiply(ej, ek));
        FpVector rhs = multiply(eji, ek) - multiply(ej, multiply(ei, ek));
        if (!(lhs == rhs)) return IdentityViolation{i, j, k};
      }
    }
  }
  identity_verified_ = true;
  return std::nullopt;
}

std::optional<ElementIdentityViolation> PreLieAlgebra::check_identity_sampled(
    std::uint64_t count, std::uint64_t seed) const {
  Rng rng(seed);
  auto random_vec = [&] {
    std::vector<std::uint32_t> c(n_);
    for (auto& x : c) x = rng.below(p_);
    return FpVector(p_, std::move(c));
  };
  for (std::uint64_t t = 0; t < count; ++t) {
    FpVector x = random_vec(), y = random_vec(), z = random_vec();
    FpVector lhs = multiply(multiply(x, y), z) - multiply(x, multiply(y, z));
    FpVector rhs = multiply(multiply(y, x), z) - multiply(y, multiply(x, z));
    if (!(lhs == rhs)) return ElementIdentityViolation{x, y, z};
  }
  return std::nullopt;
}

ChainReport PreLieAlgebra::power_chain() const {
  ChainReport report;
  report.kind = ChainKind::prelie_power;
  report.levels.push_back(FpSubspace::full(p_, n_));
  std::uint32_t cap = 2 * n_ + 2;
  for (std::uint32_t step = 0; step < cap; ++step) {
    const auto& levels = report.levels;
    std::uint32_t i = static_cast<std::uint32_t>(levels.size());  // building A^{i+1}
    SpanBuilder b(p_, n_);
    for (std::uint32_t j = 1; j <= i; ++j) {
      const FpSubspace& left = levels[j - 1];
      const FpSubspace& right = levels[i - j];
      for (const auto& u : left.rows()) {
        FpVector uv(p_, u);
        for (const auto& v : right.rows()) {
          b.add(multiply(uv, FpVector(p_, v)));
        }
      }
    }
    FpSubspace next = b.build();
    if (next.dim() == 0) {
      report.levels.push_back(next);
      report.index = static_cast<std::uint32_t>(report.levels.size());
      return report;
    }
    if (next == report.levels.back()) {
      report.levels.push_back(next);
      report.stabilized = true;
      return report;
    }
    report.levels.push_back(next);
  }
  return report;  // cap hit, no index
}

FpSubspace PreLieAlgebra::generated_by(const FpVector& x) const {
  if (x.p() != p_ || x.dim() != n_) throw InputError("generated_by: ambient mismatch");
  SpanBuilder b(p_, n_);
  b.add(x);
  bool grew = true;
  while (grew && b.rank() < n_) {
    grew = false;
    FpSubspace s = b.build();
    for (const auto& u : s.rows()) {
      FpVector uv(p_, u);
      for (const auto& v : s.rows()) {
        FpVector vv(p_, v);
        if (b.add(multiply(uv, vv))) grew = true;
        if (b.add(multiply(vv, uv))) grew = true;
      }
    }
  }
  return b.build();
}

}  // namespace braceforge
