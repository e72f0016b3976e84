#include "braceforge/correspondence.hpp"

#include <string>

namespace braceforge {

namespace {

// Packed rank of a coordinate tuple over a uniform modulus, or nullopt when
// p^n does not fit the memo key.
std::optional<std::uint64_t> memo_key(const FpVector& v) {
  std::uint64_t key = 0, weight = 1;
  for (std::uint32_t i = 0; i < v.dim(); ++i) {
    if (weight > (1ull << 62) / v.p()) return std::nullopt;
    key += weight * v[i];
    weight *= v.p();
  }
  return key;
}

}  // namespace

FlowGroup::FlowGroup(PreLieAlgebra algebra) : alg_(std::move(algebra)), k_(0) {
  if (!alg_.identity_verified()) {
    if (auto v = alg_.check_identity()) {
      throw PreconditionError("flow group needs the defining identity; violated at basis triple (" +
                              std::to_string(v->i) + "," + std::to_string(v->j) + "," +
                              std::to_string(v->k) + ")");
    }
  }
  ChainReport chain = alg_.power_chain();
  if (!chain.index) {
    throw PreconditionError("flow group needs a nilpotent algebra; power chain stabilized above zero");
  }
  k_ = *chain.index;
  if (alg_.p() <= k_) {
    throw PreconditionError("flow group needs p > nilpotency index; have p = " +
                            std::to_string(alg_.p()) + ", index = " + std::to_string(k_));
  }
  memo_enabled_ = memo_key(FpVector::zero(alg_.p(), alg_.dim())).has_value();
}

FpMatrix FlowGroup::exp_of(const FpMatrix& L, bool negate) const {
  std::uint32_t p = alg_.p(), n = alg_.dim();
  FpMatrix acc = FpMatrix::identity(p, n);
  FpMatrix term = FpMatrix::identity(p, n);
  // Terms beyond m = k-1 involve k or more factors and vanish.
  for (std::uint32_t m = 1; m <= k_ - 1; ++m) {
    term = L * term;
    term = term.scaled(modp::inv(m, p));
    acc = negate && (m % 2 == 1) ? acc - term : acc + term;
  }
  return acc;
}

FpVector FlowGroup::exp_apply(const FpVector& a, const FpVector& b) const {
  std::uint32_t p = alg_.p();
  FpVector acc = b, term = b;
  for (std::uint32_t m = 1; m <= k_ - 1; ++m) {
    term = alg_.multiply(a, term).scaled(modp::inv(m, p));
    acc = acc + term;
  }
  return acc;
}

FpVector FlowGroup::exp_apply_neg(const FpVector& a, const FpVector& b) const {
  std::uint32_t p = alg_.p();
  FpVector acc = b, term = b;
  for (std::uint32_t m = 1; m <= k_ - 1; ++m) {
    term = alg_.multiply(a, term).scaled(modp::inv(m, p));
    acc = (m % 2 == 1) ? acc - term : acc + term;
  }
  return acc;
}

FpVector FlowGroup::flow_exp(const FpVector& a) const {
  std::uint32_t p = alg_.p();
  // a + a·a/2! + a·(a·a)/3! + ... ; the m-th term has m factors, so the sum
  // stops at m = k-1.
  FpVector acc = a, term = a;
  for (std::uint32_t m = 2; m <= k_ - 1; ++m) {
    term = alg_.multiply(a, term).scaled(modp::inv(m, p));
    acc = acc + term;
  }
  return acc;
}

FpVector FlowGroup::flow_log(const FpVector& a) const {
  // Solve flow_exp(x) = a. flow_exp(x) - x has only higher-order terms, so
  // x <- a - (flow_exp(x) - x) contracts along the power filtration.
  FpVector x = a;
  for (std::uint32_t it = 0; it <= k_ + 1; ++it) {
    FpVector next = a - (flow_exp(x) - x);
    if (next == x) {
      if (!(flow_exp(x) == a)) {
        throw Error("flow_log: fixed point does not invert flow_exp (non-nilpotent input?)");
      }
      return x;
    }
    x = next;
  }
  throw Error("flow_log: no convergence within index bound (non-nilpotent input?)");
}

FpVector FlowGroup::circ(const FpVector& a, const FpVector& b) const {
  return a + exp_apply(flow_log(a), b);
}

FpVector FlowGroup::star(const FpVector& a, const FpVector& b) const {
  return star_matrix(a).apply(b);
}

FpMatrix FlowGroup::star_matrix(const FpVector& a) const {
  std::optional<std::uint64_t> key = memo_enabled_ ? memo_key(a) : std::nullopt;
  if (key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = star_memo_.find(*key);
    if (it != star_memo_.end()) return it->second;
  }
  FpMatrix e = exp_of(alg_.left_mult_matrix(flow_log(a)), false);
  FpMatrix m = e - FpMatrix::identity(alg_.p(), alg_.dim());
  if (key) {
    std::lock_guard<std::mutex> lock(mu_);
    if (star_memo_.size() < (1u << 21)) star_memo_.emplace(*key, m);
  }
  return m;
}

FpVector FlowGroup::circ_inverse(const FpVector& a) const {
  FpVector x = exp_apply_neg(flow_log(a), -a);
  if (!(circ(a, x).is_zero() && circ(x, a).is_zero())) {
    throw Error("flows circle inverse failed verification");
  }
  return x;
}

Brace prelie_to_brace(const PreLieAlgebra& A, const RunConfig& cfg) {
  auto fg = std::make_shared<FlowGroup>(A);  // verifies identity, nilpotency, p > k
  Brace b = Brace::from_flows(fg);
  // Spot-verify the brace axioms on a small seeded sample.
  CheckMode mode = CheckMode::sampled(std::min<std::uint64_t>(cfg.sample_count, 64), cfg.seed ^ 0xF10A);
  if (auto v = check_brace_axioms(b, mode)) {
    throw Error("group of flows failed a sampled brace axiom: " + v->axiom);
  }
  return b;
}

namespace {

// -sum_{i=0}^{p-2} 2^{-i} ((2^i a) * b), the element-level conversion product.
FpVector conversion_product(const Brace& B, const FpVector& a, const FpVector& b) {
  std::uint32_t p = B.p();
  FpVector acc = FpVector::zero(p, B.dim());
  FpVector pow_a = a;                                     // 2^i a
  std::uint32_t inv2 = p > 2 ? modp::inv(2, p) : 1;
  std::uint32_t coef = 1;                                 // 2^{-i}
  for (std::uint32_t i = 0; i + 1 < p; ++i) {
    acc = acc + B.star(pow_a, b).scaled(coef);
    pow_a = pow_a + pow_a;
    coef = modp::mul(coef, inv2, p);
  }
  return -acc;
}

struct ConversionResult {
  PreLieAlgebra algebra;
  std::vector<std::string> violations;
  std::optional<std::uint32_t> chain_index;
  bool chain_sampled;
};

ConversionResult convert_brace(const Brace& B, const RunConfig& cfg, bool enforce) {
  if (!B.is_fp()) throw InputError("conversion needs an F_p-brace");
  std::uint32_t p = B.p(), n = B.dim();

  ChainReport chain = brace_chain(B, ChainKind::strong, cfg);
  std::vector<std::string> violations;
  if (!chain.index) {
    if (enforce) {
      throw PreconditionError("conversion needs a strongly nilpotent brace; chain did not reach zero");
    }
    violations.push_back("strong chain did not reach zero");
  }
  if (chain.index) {
    std::uint32_t k = *chain.index;
    bool gate_ok = k < 32 && (1ull << k) < p;
    if (!gate_ok) {
      std::string msg = "conversion formula needs 2^k < p; have k = " + std::to_string(k) +
                        ", p = " + std::to_string(p);
      if (enforce) throw PreconditionError(msg);
      violations.push_back(msg);
    }
  }

  // Structure constants from basis pairs; left additivity licenses this.
  std::vector<std::uint32_t> c(static_cast<std::size_t>(n) * n * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      FpVector prod =
          conversion_product(B, FpVector::unit(p, n, i), FpVector::unit(p, n, j));
      for (std::uint32_t k2 = 0; k2 < n; ++k2) {
        c[(static_cast<std::size_t>(i) * n + j) * n + k2] = prod[k2];
      }
    }
  }
  PreLieAlgebra A(p, n, std::move(c));

  // Bilinearity of the table against direct element-level evaluation, on a
  // seeded sample. This is a theorem under the hypotheses, not a structural
  // fact, so it is re-verified at runtime.
  Rng rng = derived_rng(cfg, "brace_to_prelie.bilinearity");
  std::uint64_t spot = std::min<std::uint64_t>(cfg.sample_count, 200);
  for (std::uint64_t t = 0; t < spot; ++t) {
    std::vector<std::uint32_t> uc(n), vc(n);
    for (auto& x : uc) x = rng.below(p);
    for (auto& x : vc) x = rng.below(p);
    FpVector u(p, std::move(uc)), v(p, std::move(vc));
    if (!(A.multiply(u, v) == conversion_product(B, u, v))) {
      std::string msg = "conversion product is not bilinear";
      if (enforce) throw PreconditionError(msg + " (hypotheses violated)");
      violations.push_back(msg);
      break;
    }
  }
  if (auto v = A.check_identity()) {
    std::string msg = "converted product violates the defining identity at basis triple (" +
                      std::to_string(v->i) + "," + std::to_string(v->j) + "," +
                      std::to_string(v->k) + ")";
    if (enforce) throw PreconditionError(msg + " (hypotheses violated)");
    violations.push_back(msg);
  }
  return ConversionResult{std::move(A), std::move(violations), chain.index, chain.sampled};
}

}  // namespace

PreLieAlgebra brace_to_prelie(const Brace& B, const RunConfig& cfg) {
  return convert_brace(B, cfg, /*enforce=*/true).algebra;
}

ForcedConversion brace_to_prelie_forced(const Brace& B, const RunConfig& cfg) {
  ConversionResult r = convert_brace(B, cfg, /*enforce=*/false);
  return ForcedConversion{std::move(r.algebra), std::move(r.violations), r.chain_index,
                          r.chain_sampled};
}

RoundtripReport roundtrip_algebra(const PreLieAlgebra& A, const RunConfig& cfg) {
  RoundtripReport rep;
  Brace b = prelie_to_brace(A, cfg);
  std::uint32_t k = b.flows().index();
  if (k >= 32 || (1ull << k) >= A.p()) {
    throw PreconditionError("round trip needs 2^k < p; have k = " + std::to_string(k) + ", p = " +
                            std::to_string(A.p()));
  }
  PreLieAlgebra back = brace_to_prelie(b, cfg);
  rep.algebra_index = k;
  ChainReport brace_chain_report = brace_chain(b, ChainKind::strong, cfg);
  rep.brace_index = brace_chain_report.index;
  rep.sampled = brace_chain_report.sampled;
  if (!(back == A)) {
    rep.ok = false;
    rep.detail = "structure constants differ after round trip";
    return rep;
  }
  if (!rep.brace_index || *rep.brace_index != k) {
    rep.ok = false;
    rep.detail = "nilpotency indexes disagree";
    return rep;
  }
  rep.ok = true;
  return rep;
}

RoundtripReport roundtrip_brace(const Brace& B, const RunConfig& cfg) {
  RoundtripReport rep;
  ChainReport chain = brace_chain(B, ChainKind::strong, cfg);
  rep.brace_index = chain.index;
  rep.sampled = chain.sampled;
  PreLieAlgebra A = brace_to_prelie(B, cfg);
  Brace back = prelie_to_brace(A, cfg);
  rep.algebra_index = back.flows().index();

  std::uint32_t p = B.p(), n = B.dim();
  std::uint64_t order = B.order();
  unsigned __int128 pairs = static_cast<unsigned __int128>(order) * order;
  if (pairs <= cfg.exhaustive_cap) {
    std::vector<std::uint32_t> mods(B.moduli().begin(), B.moduli().end());
    for (std::uint64_t ra = 0; ra < order; ++ra) {
      FpVector a(p, unrank(ra, mods));
      for (std::uint64_t rb = 0; rb < order; ++rb) {
        FpVector bb(p, unrank(rb, mods));
        if (!(B.circ(a, bb) == back.circ(a, bb))) {
          rep.ok = false;
          rep.detail = "circle products differ at ranks (" + std::to_string(ra) + "," +
                       std::to_string(rb) + ")";
          return rep;
        }
      }
    }
  } else {
    rep.sampled = true;
    Rng rng = derived_rng(cfg, "roundtrip_brace");
    for (std::uint64_t t = 0; t < cfg.sample_count; ++t) {
      std::vector<std::uint32_t> ac(n), bc(n);
      for (auto& x : ac) x = rng.below(p);
      for (auto& x : bc) x = rng.below(p);
      FpVector a(p, std::move(ac)), bb(p, std::move(bc));
      if (!(B.circ(a, bb) == back.circ(a, bb))) {
        rep.ok = false;
        rep.detail = "circle products differ on a sampled pair";
        return rep;
      }
    }
  }
  if (!rep.brace_index || *rep.brace_index != back.flows().index()) {
    rep.ok = false;
    rep.detail = "nilpotency indexes disagree";
    return rep;
  }
  rep.ok = true;
  return rep;
}

}  // namespace braceforge
