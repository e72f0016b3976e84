#include "braceforge/subspace.hpp"

#include <algorithm>
#include <string>

namespace braceforge {

FpSubspace FpSubspace::zero(std::uint32_t p, std::uint32_t ambient_dim) {
  require_prime(p);
  return FpSubspace(p, ambient_dim);
}

FpSubspace FpSubspace::full(std::uint32_t p, std::uint32_t ambient_dim) {
  SpanBuilder b(p, ambient_dim);
  for (std::uint32_t i = 0; i < ambient_dim; ++i) {
    std::vector<std::uint32_t> e(ambient_dim, 0);
    e[i] = 1;
    b.add(e);
  }
  return b.build();
}

FpVector FpSubspace::basis_vector(std::size_t i) const { return FpVector(p_, rows_.at(i)); }

bool FpSubspace::contains(const FpVector& v) const {
  if (v.p() != p_ || v.dim() != ambient_) throw InputError("subspace membership: ambient mismatch");
  return contains(v.coords());
}

bool FpSubspace::contains(std::span<const std::uint32_t> coords) const {
  std::vector<std::uint32_t> r(coords.begin(), coords.end());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    std::uint32_t c = r[pivots_[k]];
    if (c == 0) continue;
    const auto& row = rows_[k];
    for (std::uint32_t j = 0; j < ambient_; ++j) {
      r[j] = modp::sub(r[j], modp::mul(c, row[j], p_), p_);
    }
  }
  return std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; });
}

bool FpSubspace::contains_subspace(const FpSubspace& other) const {
  if (other.p_ != p_ || other.ambient_ != ambient_) throw InputError("subspace inclusion: ambient mismatch");
  for (const auto& row : other.rows_) {
    if (!contains(row)) return false;
  }
  return true;
}

FpSubspace FpSubspace::sum(const FpSubspace& other) const {
  if (other.p_ != p_ || other.ambient_ != ambient_) throw InputError("subspace sum: ambient mismatch");
  SpanBuilder b(*this);
  for (const auto& row : other.rows_) b.add(row);
  return b.build();
}

std::uint64_t FpSubspace::element_count() const {
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < dim(); ++i) {
    if (n > (1ull << 62) / p_) throw ResourceError("subspace too large to enumerate");
    n *= p_;
  }
  return n;
}

void FpSubspace::for_each_element(
    const std::function<void(std::span<const std::uint32_t>)>& fn) const {
  std::vector<std::uint32_t> coeff(dim(), 0);
  std::vector<std::uint32_t> v(ambient_, 0);
  std::uint64_t total = element_count();
  for (std::uint64_t it = 0;; ++it) {
    fn(v);
    if (it + 1 == total) break;
    // Increment the coefficient tuple and update v incrementally.
    for (std::size_t k = 0;; ++k) {
      coeff[k] = (coeff[k] + 1) % p_;
      for (std::uint32_t j = 0; j < ambient_; ++j) v[j] = modp::add(v[j], rows_[k][j], p_);
      if (coeff[k] != 0) break;
      // wrapped: p * row = 0 was already added implicitly; continue carry
    }
  }
}

std::optional<std::vector<std::uint32_t>> FpSubspace::coordinates_of(
    std::span<const std::uint32_t> v) const {
  std::vector<std::uint32_t> r(v.begin(), v.end());
  std::vector<std::uint32_t> coeff(rows_.size(), 0);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    std::uint32_t c = r[pivots_[k]];
    if (c == 0) continue;
    coeff[k] = c;
    for (std::uint32_t j = 0; j < ambient_; ++j) {
      r[j] = modp::sub(r[j], modp::mul(c, rows_[k][j], p_), p_);
    }
  }
  if (!std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; })) return std::nullopt;
  return coeff;
}

SpanBuilder::SpanBuilder(std::uint32_t p, std::uint32_t ambient_dim) : p_(p), ambient_(ambient_dim) {
  require_prime(p);
}

SpanBuilder::SpanBuilder(const FpSubspace& start)
    : p_(start.p()), ambient_(start.ambient_dim()) {
  for (const auto& row : start.rows()) add(row);
}

bool SpanBuilder::add(const FpVector& v) {
  if (v.p() != p_ || v.dim() != ambient_) throw InputError("span: ambient mismatch");
  return add(v.coords());
}

bool SpanBuilder::contains(std::span<const std::uint32_t> v) const {
  std::vector<std::uint32_t> r(v.begin(), v.end());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    std::uint32_t c = r[pivots_[k]];
    if (c == 0) continue;
    for (std::uint32_t j = 0; j < ambient_; ++j) {
      r[j] = modp::sub(r[j], modp::mul(c, rows_[k][j], p_), p_);
    }
  }
  return std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; });
}

bool SpanBuilder::add(std::span<const std::uint32_t> v) {
  if (v.size() != ambient_) throw InputError("span: ambient mismatch");
  std::vector<std::uint32_t> r(v.begin(), v.end());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    std::uint32_t c = r[pivots_[k]];
    if (c == 0) continue;
    for (std::uint32_t j = 0; j < ambient_; ++j) {
      r[j] = modp::sub(r[j], modp::mul(c, rows_[k][j], p_), p_);
    }
  }
  std::uint32_t piv = ambient_;
  for (std::uint32_t j = 0; j < ambient_; ++j) {
    if (r[j] != 0) {
      piv = j;
      break;
    }
  }
  if (piv == ambient_) return false;

  // Normalize the pivot to 1 and clear the pivot column in existing rows.
  std::uint32_t inv = modp::inv(r[piv], p_);
  for (std::uint32_t j = 0; j < ambient_; ++j) r[j] = modp::mul(r[j], inv, p_);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    std::uint32_t c = rows_[k][piv];
    if (c == 0) continue;
    for (std::uint32_t j = 0; j < ambient_; ++j) {
      rows_[k][j] = modp::sub(rows_[k][j], modp::mul(c, r[j], p_), p_);
    }
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
  std::size_t idx = static_cast<std::size_t>(pos - pivots_.begin());
  pivots_.insert(pos, piv);
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), std::move(r));
  return true;
}

FpSubspace SpanBuilder::build() const {
  FpSubspace s(p_, ambient_);
  s.rows_ = rows_;
  s.pivots_ = pivots_;
  return s;
}

FpSubspace span(std::span<const FpVector> vectors) {
  if (vectors.empty()) throw InputError("span of empty list needs explicit ambient data");
  return span(vectors[0].p(), vectors[0].dim(), vectors);
}

FpSubspace span(std::uint32_t p, std::uint32_t ambient_dim, std::span<const FpVector> vectors) {
  SpanBuilder b(p, ambient_dim);
  for (const auto& v : vectors) b.add(v);
  return b.build();
}

std::uint64_t subspace_count(std::uint32_t p, std::uint32_t n, std::uint64_t cap) {
  require_prime(p);
  // Gaussian binomials [n k]_p via the q-Pascal recurrence, with overflow
  // folded into the cap check.
  std::vector<unsigned __int128> row(n + 1, 0);
  row[0] = 1;
  for (std::uint32_t m = 1; m <= n; ++m) {
    std::vector<unsigned __int128> next(n + 1, 0);
    next[0] = 1;
    for (std::uint32_t k = 1; k <= m; ++k) {
      unsigned __int128 pk = 1;
      for (std::uint32_t i = 0; i < k; ++i) pk *= p;
      next[k] = row[k - 1] + pk * row[k];
      if (next[k] > (static_cast<unsigned __int128>(1) << 100)) {
        throw ResourceError("subspace count exceeds cap " + std::to_string(cap));
      }
    }
    row = std::move(next);
  }
  unsigned __int128 total = 0;
  for (auto v : row) total += v;
  if (total > cap) throw ResourceError("subspace count exceeds cap " + std::to_string(cap));
  return static_cast<std::uint64_t>(total);
}

namespace {

// All RREF bases of dimension k: choose pivot columns, then fill the free
// entries. Every subspace has exactly one such basis.
void emit_dimension(std::uint32_t p, std::uint32_t n, std::uint32_t k,
                    std::vector<FpSubspace>& out) {
  std::vector<std::uint32_t> pivots(k);
  // first combination 0,1,...,k-1
  for (std::uint32_t i = 0; i < k; ++i) pivots[i] = i;
  while (true) {
    // Free positions: row i, non-pivot columns right of pivots[i].
    std::vector<std::pair<std::uint32_t, std::uint32_t>> free_pos;
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::uint32_t i = 0; i < k; ++i) {
      for (std::uint32_t j = pivots[i] + 1; j < n; ++j) {
        if (!is_pivot[j]) free_pos.emplace_back(i, j);
      }
    }
    std::vector<std::uint32_t> fill(free_pos.size(), 0);
    while (true) {
      SpanBuilder b(p, n);
      std::vector<std::vector<std::uint32_t>> rows(k, std::vector<std::uint32_t>(n, 0));
      for (std::uint32_t i = 0; i < k; ++i) rows[i][pivots[i]] = 1;
      for (std::size_t t = 0; t < free_pos.size(); ++t) rows[free_pos[t].first][free_pos[t].second] = fill[t];
      for (auto& r : rows) b.add(r);
      out.push_back(b.build());
      // next fill
      std::size_t t = 0;
      for (; t < fill.size(); ++t) {
        fill[t] = (fill[t] + 1) % p;
        if (fill[t] != 0) break;
      }
      if (t == fill.size()) break;
    }
    // next pivot combination (lexicographic)
    std::int64_t i = static_cast<std::int64_t>(k) - 1;
    while (i >= 0 && pivots[static_cast<std::size_t>(i)] == n - k + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) break;
    ++pivots[static_cast<std::size_t>(i)];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
  }
}

}  // namespace

void for_each_subspace(std::uint32_t p, std::uint32_t n, std::uint64_t cap,
                       const std::function<void(const FpSubspace&)>& fn) {
  subspace_count(p, n, cap);  // enforce the cap up front
  for (std::uint32_t k = 0; k <= n; ++k) {
    std::vector<FpSubspace> batch;
    if (k == 0) {
      batch.push_back(FpSubspace::zero(p, n));
    } else {
      emit_dimension(p, n, k, batch);
    }
    std::sort(batch.begin(), batch.end(), [](const FpSubspace& a, const FpSubspace& b) {
      return a.rows() < b.rows();
    });
    for (const auto& s : batch) fn(s);
  }
}

std::vector<FpSubspace> enumerate_subspaces(std::uint32_t p, std::uint32_t n, std::uint64_t cap) {
  std::vector<FpSubspace> out;
  for_each_subspace(p, n, cap, [&](const FpSubspace& s) { out.push_back(s); });
  return out;
}

}  // namespace braceforge
