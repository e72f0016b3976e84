#include "braceforge/brace.hpp"

#include <algorithm>
#include <string>

#include "braceforge/correspondence.hpp"

namespace braceforge {

namespace {

std::uint64_t checked_order(std::span<const std::uint32_t> moduli) {
  std::uint64_t n = 1;
  for (auto m : moduli) {
    require_prime(m);
    if (n > (1ull << 62) / m) throw ResourceError("brace order exceeds 2^62");
    n *= m;
  }
  return n;
}

bool all_equal(std::span<const std::uint32_t> moduli) {
  return std::all_of(moduli.begin(), moduli.end(),
                     [&](std::uint32_t m) { return m == moduli[0]; });
}

}  // namespace

Brace Brace::from_table(std::vector<std::uint32_t> moduli, std::vector<std::uint32_t> star_ranks) {
  Brace b;
  b.backend_ = BraceBackend::table;
  b.moduli_ = std::move(moduli);
  if (b.moduli_.empty()) throw InputError("table brace needs at least one coordinate");
  b.order_ = checked_order(b.moduli_);
  if (b.order_ > 4096) throw ResourceError("table backend limited to order 4096");
  b.uniform_ = all_equal(b.moduli_);
  if (star_ranks.size() != b.order_ * b.order_) {
    throw InputError("star table: expected " + std::to_string(b.order_ * b.order_) + " entries");
  }
  for (auto r : star_ranks) {
    if (r >= b.order_) throw InputError("star table: entry out of range");
  }
  b.table_ = std::move(star_ranks);
  return b;
}

Brace Brace::from_ring(std::uint32_t p, std::uint32_t dim, std::vector<std::uint32_t> constants) {
  require_prime(p);
  Brace b;
  b.backend_ = BraceBackend::ring;
  b.moduli_.assign(dim, p);
  b.uniform_ = true;
  b.order_ = checked_order(b.moduli_);
  if (constants.size() != static_cast<std::size_t>(dim) * dim * dim) {
    throw InputError("ring constants: expected dim^3 entries");
  }
  for (auto& x : constants) {
    if (x >= p) x %= p;
  }
  b.ring_c_ = std::move(constants);
  return b;
}

Brace Brace::from_flows(std::shared_ptr<const FlowGroup> flows) {
  if (!flows) throw InputError("flows backend needs a flow group");
  Brace b;
  b.backend_ = BraceBackend::flows;
  b.moduli_.assign(flows->dim(), flows->p());
  b.uniform_ = true;
  b.order_ = checked_order(b.moduli_);
  b.flows_ = std::move(flows);
  return b;
}

Brace Brace::trivial(std::uint32_t p, std::uint32_t dim) {
  return from_ring(p, dim, std::vector<std::uint32_t>(static_cast<std::size_t>(dim) * dim * dim, 0));
}

std::uint32_t Brace::p() const {
  if (!uniform_) throw InputError("mixed-moduli brace has no single modulus");
  return moduli_[0];
}

std::span<const std::uint32_t> Brace::ring_constants() const {
  if (backend_ != BraceBackend::ring) throw InputError("not a ring-backend brace");
  return ring_c_;
}

const FlowGroup& Brace::flows() const {
  if (backend_ != BraceBackend::flows) throw InputError("not a flows-backend brace");
  return *flows_;
}

std::span<const std::uint32_t> Brace::star_table() const {
  if (backend_ != BraceBackend::table) throw InputError("not a table-backend brace");
  return table_;
}

FpVector Brace::star(const FpVector& a, const FpVector& b) const {
  if (!uniform_) throw InputError("element-level star needs a uniform modulus");
  if (a.p() != p() || a.dim() != dim()) throw InputError("star: ambient mismatch");
  require_same_space(a, b);
  switch (backend_) {
    case BraceBackend::table: {
      std::uint64_t r = table_[rank_of(a.coords(), moduli_) * order_ + rank_of(b.coords(), moduli_)];
      return FpVector(p(), unrank(r, moduli_));
    }
    case BraceBackend::ring: {
      std::uint32_t pp = p(), n = dim();
      std::vector<std::uint32_t> out(n, 0);
      for (std::uint32_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::uint32_t j = 0; j < n; ++j) {
          if (b[j] == 0) continue;
          std::uint32_t w = modp::mul(a[i], b[j], pp);
          const std::uint32_t* cij = &ring_c_[(static_cast<std::size_t>(i) * n + j) * n];
          for (std::uint32_t k = 0; k < n; ++k) {
            out[k] = modp::add(out[k], modp::mul(w, cij[k], pp), pp);
          }
        }
      }
      return FpVector(pp, std::move(out));
    }
    case BraceBackend::flows:
      return flows_->star(a, b);
  }
  throw InputError("unreachable backend");
}

FpVector Brace::circ(const FpVector& a, const FpVector& b) const { return a + b + star(a, b); }

FpVector Brace::lambda(const FpVector& a, const FpVector& b) const { return star(a, b) + b; }

FpMatrix Brace::star_operator(const FpVector& a) const {
  if (!uniform_) throw InputError("star_operator needs a uniform modulus");
  switch (backend_) {
    case BraceBackend::flows:
      return flows_->star_matrix(a);
    default: {
      std::uint32_t n = dim();
      FpMatrix m(p(), n, n);
      for (std::uint32_t j = 0; j < n; ++j) {
        FpVector col = star(a, FpVector::unit(p(), n, j));
        for (std::uint32_t i = 0; i < n; ++i) m.set(i, j, col[i]);
      }
      return m;
    }
  }
}

FpVector Brace::circ_inverse(const FpVector& a) const {
  if (!uniform_) throw InputError("element-level inverse needs a uniform modulus");
  if (backend_ == BraceBackend::flows) {
    return flows_->circ_inverse(a);
  }
  // x <- -a - a*x converges when the left chain descends.
  FpVector x = -a;
  for (std::uint32_t it = 0; it < dim() + 2; ++it) {
    FpVector next = -(a + star(a, x));
    if (next == x) break;
    x = next;
  }
  if (circ(a, x).is_zero() && circ(x, a).is_zero()) return x;
  if (backend_ == BraceBackend::table) {
    for (std::uint64_t r = 0; r < order_; ++r) {
      FpVector cand(p(), unrank(r, moduli_));
      if (circ(a, cand).is_zero() && circ(cand, a).is_zero()) return cand;
    }
    throw InputError("element has no circle inverse (not a brace?)");
  }
  throw PreconditionError("circle inverse not found within cap: brace not left nilpotent?");
}

std::uint64_t Brace::add_rank(std::uint64_t a, std::uint64_t b) const {
  auto ca = unrank(a, moduli_), cb = unrank(b, moduli_);
  for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = modp::add(ca[i], cb[i], moduli_[i]);
  return rank_of(ca, moduli_);
}

std::uint64_t Brace::neg_rank(std::uint64_t a) const {
  auto ca = unrank(a, moduli_);
  for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = modp::neg(ca[i], moduli_[i]);
  return rank_of(ca, moduli_);
}

std::uint64_t Brace::star_rank(std::uint64_t a, std::uint64_t b) const {
  if (backend_ == BraceBackend::table) return table_[a * order_ + b];
  FpVector va(p(), unrank(a, moduli_)), vb(p(), unrank(b, moduli_));
  return rank_of(star(va, vb).coords(), moduli_);
}

std::uint64_t Brace::circ_rank(std::uint64_t a, std::uint64_t b) const {
  return add_rank(add_rank(a, b), star_rank(a, b));
}

std::uint64_t Brace::circ_inverse_rank(std::uint64_t a) const {
  if (uniform_ && backend_ != BraceBackend::table) {
    return rank_of(circ_inverse(FpVector(p(), unrank(a, moduli_))).coords(), moduli_);
  }
  for (std::uint64_t x = 0; x < order_; ++x) {
    if (circ_rank(a, x) == 0 && circ_rank(x, a) == 0) return x;
  }
  throw InputError("element has no circle inverse (not a brace?)");
}

namespace {

FpVector random_vector(std::uint32_t p, std::uint32_t n, Rng& rng) {
  std::vector<std::uint32_t> c(n);
  for (auto& x : c) x = rng.below(p);
  return FpVector(p, std::move(c));
}

}  // namespace

std::optional<BraceViolation> check_brace_axioms(const Brace& B, const CheckMode& mode) {
  if (!B.is_fp()) throw InputError("element-level axiom check needs a uniform modulus; use ranks");
  std::uint32_t p = B.p(), n = B.dim();
  FpVector zero = FpVector::zero(p, n);

  auto violation_of = [&](const FpVector& a, const FpVector& b,
                          const FpVector& c) -> std::optional<BraceViolation> {
    // (i) brace law
    if (!(B.circ(a, b + c) + a == B.circ(a, b) + B.circ(a, c))) {
      return BraceViolation{"brace-law", a, b, c};
    }
    // (ii) circle associativity
    if (!(B.circ(B.circ(a, b), c) == B.circ(a, B.circ(b, c)))) {
      return BraceViolation{"assoc", a, b, c};
    }
    return std::nullopt;
  };

  // (iii) 0 is the circle identity.
  auto identity_at = [&](const FpVector& a) -> std::optional<BraceViolation> {
    if (!(B.circ(zero, a) == a) || !(B.circ(a, zero) == a)) {
      return BraceViolation{"identity", a, zero, zero};
    }
    return std::nullopt;
  };

  if (mode.exhaustive) {
    std::uint64_t order = B.order();
    unsigned __int128 triples = static_cast<unsigned __int128>(order) * order * order;
    if (triples > 100000000) {
      throw PreconditionError("exhaustive axiom check needs order^3 <= 10^8");
    }
    std::vector<std::uint32_t> mods(B.moduli().begin(), B.moduli().end());
    std::vector<FpVector> elems;
    elems.reserve(order);
    for (std::uint64_t r = 0; r < order; ++r) elems.emplace_back(p, unrank(r, mods));
    for (const auto& a : elems) {
      if (auto v = identity_at(a)) return v;
    }
    for (const auto& a : elems) {
      for (const auto& b : elems) {
        for (const auto& c : elems) {
          if (auto v = violation_of(a, b, c)) return v;
        }
      }
      // (iv) every element has a circle inverse
      try {
        FpVector inv = B.circ_inverse(a);
        if (!B.circ(a, inv).is_zero()) return BraceViolation{"inverse", a, a, a};
      } catch (const Error&) {
        return BraceViolation{"inverse", a, a, a};
      }
    }
    return std::nullopt;
  }

  Rng rng(mode.seed);
  for (std::uint64_t t = 0; t < mode.samples; ++t) {
    FpVector a = random_vector(p, n, rng), b = random_vector(p, n, rng),
             c = random_vector(p, n, rng);
    if (auto v = identity_at(a)) return v;
    if (auto v = violation_of(a, b, c)) return v;
    if (t % 16 == 0) {
      try {
        FpVector inv = B.circ_inverse(a);
        if (!(B.circ(a, inv).is_zero() && B.circ(inv, a).is_zero())) {
          return BraceViolation{"inverse", a, a, a};
        }
      } catch (const Error&) {
        return BraceViolation{"inverse", a, a, a};
      }
    }
  }
  return std::nullopt;
}

std::optional<BraceViolationRank> check_brace_axioms_ranks(const Brace& B, const CheckMode& mode) {
  std::uint64_t order = B.order();
  auto check_triple = [&](std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) -> std::optional<BraceViolationRank> {
    std::uint64_t lhs = B.add_rank(B.circ_rank(a, B.add_rank(b, c)), a);
    std::uint64_t rhs = B.add_rank(B.circ_rank(a, b), B.circ_rank(a, c));
    if (lhs != rhs) return BraceViolationRank{"brace-law", a, b, c};
    if (B.circ_rank(B.circ_rank(a, b), c) != B.circ_rank(a, B.circ_rank(b, c))) {
      return BraceViolationRank{"assoc", a, b, c};
    }
    return std::nullopt;
  };
  if (mode.exhaustive) {
    unsigned __int128 triples = static_cast<unsigned __int128>(order) * order * order;
    if (triples > 100000000) throw PreconditionError("exhaustive axiom check needs order^3 <= 10^8");
    for (std::uint64_t a = 0; a < order; ++a) {
      if (B.circ_rank(0, a) != a || B.circ_rank(a, 0) != a) return BraceViolationRank{"identity", a, 0, 0};
      try {
        std::uint64_t inv = B.circ_inverse_rank(a);
        if (B.circ_rank(a, inv) != 0) return BraceViolationRank{"inverse", a, a, a};
      } catch (const Error&) {
        return BraceViolationRank{"inverse", a, a, a};
      }
    }
    for (std::uint64_t a = 0; a < order; ++a) {
      for (std::uint64_t b = 0; b < order; ++b) {
        for (std::uint64_t c = 0; c < order; ++c) {
          if (auto v = check_triple(a, b, c)) return v;
        }
      }
    }
    return std::nullopt;
  }
  Rng rng(mode.seed);
  for (std::uint64_t t = 0; t < mode.samples; ++t) {
    std::uint64_t a = rng.next() % order, b = rng.next() % order, c = rng.next() % order;
    if (B.circ_rank(0, a) != a || B.circ_rank(a, 0) != a) return BraceViolationRank{"identity", a, 0, 0};
    if (auto v = check_triple(a, b, c)) return v;
  }
  return std::nullopt;
}

std::optional<LinearityViolation> check_fp_linearity(const Brace& B, const CheckMode& mode) {
  if (!B.is_fp()) throw InputError("F_p-linearity needs a uniform modulus");
  std::uint32_t p = B.p(), n = B.dim();
  auto check = [&](const FpVector& a, std::uint32_t alpha,
                   const FpVector& b) -> std::optional<LinearityViolation> {
    if (!(B.star(a, b.scaled(alpha)) == B.star(a, b).scaled(alpha))) {
      return LinearityViolation{a, b, alpha};
    }
    return std::nullopt;
  };
  if (mode.exhaustive) {
    std::uint64_t order = B.order();
    unsigned __int128 work = static_cast<unsigned __int128>(order) * order * p;
    if (work > 100000000) throw PreconditionError("exhaustive linearity check needs |A|^2 p <= 10^8");
    std::vector<std::uint32_t> mods(B.moduli().begin(), B.moduli().end());
    for (std::uint64_t ra = 0; ra < order; ++ra) {
      FpVector a(p, unrank(ra, mods));
      for (std::uint64_t rb = 0; rb < order; ++rb) {
        FpVector b(p, unrank(rb, mods));
        for (std::uint32_t alpha = 0; alpha < p; ++alpha) {
          if (auto v = check(a, alpha, b)) return v;
        }
      }
    }
    return std::nullopt;
  }
  Rng rng(mode.seed);
  for (std::uint64_t t = 0; t < mode.samples; ++t) {
    FpVector a = random_vector(p, n, rng), b = random_vector(p, n, rng);
    std::uint32_t alpha = rng.below(p);
    if (auto v = check(a, alpha, b)) return v;
  }
  return std::nullopt;
}

namespace {

// Span of {a*b : a in left (all elements or sampled), b in basis(right)}.
// Returns true if any sampling happened. The adaptive rule (stop after 128
// consecutive non-increasing samples) is deterministic given the stream.
bool accumulate_star_products(const Brace& B, const FpSubspace& left, const FpSubspace& right,
                              const RunConfig& cfg, Rng& rng, SpanBuilder& acc) {
  if (right.dim() == 0 || left.dim() == 0) return false;
  std::uint32_t p = B.p();
  std::vector<FpVector> rbasis;
  for (std::size_t i = 0; i < right.dim(); ++i) rbasis.push_back(right.basis_vector(i));

  std::uint64_t count = left.element_count();
  if (count <= cfg.exhaustive_cap) {
    left.for_each_element([&](std::span<const std::uint32_t> coords) {
      FpVector a(p, std::vector<std::uint32_t>(coords.begin(), coords.end()));
      FpMatrix op = B.star_operator(a);
      for (const auto& b : rbasis) acc.add(op.apply(b));
    });
    return false;
  }
  if (!cfg.allow_sampled) {
    throw ResourceError("subgroup of " + std::to_string(count) +
                        " elements exceeds exhaustive cap " + std::to_string(cfg.exhaustive_cap) +
                        " and sampling is not permitted");
  }
  const std::uint32_t stall_limit = 128;
  std::uint32_t stall = 0;
  for (std::uint64_t t = 0; t < cfg.sample_count && stall < stall_limit; ++t) {
    // Random element of the left subspace: random coefficients on its basis.
    std::vector<std::uint32_t> coords(B.dim(), 0);
    for (std::size_t i = 0; i < left.dim(); ++i) {
      std::uint32_t coef = rng.below(p);
      if (coef == 0) continue;
      const auto& row = left.rows()[i];
      for (std::uint32_t j = 0; j < B.dim(); ++j) {
        coords[j] = modp::add(coords[j], modp::mul(coef, row[j], p), p);
      }
    }
    FpVector a(p, std::move(coords));
    FpMatrix op = B.star_operator(a);
    bool grew = false;
    for (const auto& b : rbasis) grew = acc.add(op.apply(b)) || grew;
    stall = grew ? 0 : stall + 1;
  }
  return true;
}

}  // namespace

ChainReport brace_chain(const Brace& B, ChainKind kind, const RunConfig& cfg) {
  if (!B.is_fp()) throw InputError("brace_chain needs a uniform modulus");
  if (kind == ChainKind::prelie_power) throw InputError("prelie-power chain belongs to the algebra");
  std::uint32_t p = B.p(), n = B.dim();
  ChainReport report;
  report.kind = kind;
  report.levels.push_back(FpSubspace::full(p, n));
  Rng rng = derived_rng(cfg, "brace_chain");
  std::uint32_t cap = 2 * n + 2;
  for (std::uint32_t step = 0; step < cap; ++step) {
    const auto& levels = report.levels;
    std::uint32_t i = static_cast<std::uint32_t>(levels.size());
    SpanBuilder b(p, n);
    switch (kind) {
      case ChainKind::left:
        report.sampled |= accumulate_star_products(B, levels[0], levels[i - 1], cfg, rng, b);
        break;
      case ChainKind::right:
        report.sampled |= accumulate_star_products(B, levels[i - 1], levels[0], cfg, rng, b);
        break;
      case ChainKind::strong:
        for (std::uint32_t j = 1; j <= i; ++j) {
          report.sampled |= accumulate_star_products(B, levels[j - 1], levels[i - j], cfg, rng, b);
        }
        break;
      case ChainKind::prelie_power:
        break;
    }
    FpSubspace next = b.build();
    report.levels.push_back(next);
    if (next.dim() == 0) {
      report.index = static_cast<std::uint32_t>(report.levels.size());
      return report;
    }
    if (next == report.levels[report.levels.size() - 2]) {
      report.stabilized = true;
      return report;
    }
  }
  return report;
}

ExpansionSequence expansion_sequence(const Brace& B, const FpVector& a, const FpVector& b,
                                     std::uint32_t steps) {
  ExpansionSequence seq;
  seq.d.emplace_back(a, b);
  for (std::uint32_t i = 0; i < steps; ++i) {
    const auto& [di, dip] = seq.d.back();
    seq.d.emplace_back(di + dip, B.star(di, dip));
  }
  return seq;
}

ExpansionCheck check_sum_expansion(const Brace& B, const FpVector& a, const FpVector& b,
                                   const FpVector& c, std::uint32_t s) {
  FpVector lhs = B.star(a + b, c);
  FpVector rhs = B.star(a, c) + B.star(b, c);
  FpVector di = a, dip = b;
  for (std::uint32_t i = 0; i <= 2 * s; ++i) {
    if (dip.is_zero()) break;  // all later terms vanish with d_i'
    FpVector term = B.star(B.star(di, dip), c) - B.star(di, B.star(dip, c));
    // (-1)^{i+1}: subtract for even i, add for odd i.
    rhs = (i % 2 == 0) ? rhs - term : rhs + term;
    FpVector next_di = di + dip;
    dip = B.star(di, dip);
    di = next_di;
  }
  return ExpansionCheck{lhs == rhs, lhs, rhs};
}

FpSubspace generated_subbrace(const Brace& B, const FpVector& x, const RunConfig& cfg) {
  if (!B.is_fp()) throw InputError("generated_subbrace needs a uniform modulus");
  std::uint32_t p = B.p(), n = B.dim();
  SpanBuilder acc(p, n);
  acc.add(x);
  Rng rng = derived_rng(cfg, "generated_subbrace");
  for (std::uint32_t round = 0; round < 2 * n + 2; ++round) {
    FpSubspace s = acc.build();
    std::uint32_t before = acc.rank();
    accumulate_star_products(B, s, s, cfg, rng, acc);
    if (acc.rank() == before || acc.full_rank()) break;
  }
  return acc.build();
}

}  // namespace braceforge
