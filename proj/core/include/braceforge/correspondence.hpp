#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "braceforge/brace.hpp"
#include "braceforge/config.hpp"
#include "braceforge/prelie.hpp"

namespace braceforge {

/// The group of flows of a verified nilpotent pre-Lie algebra of index k,
/// requiring p > k so the factorials in the truncated exponentials are
/// invertible. Construction verifies the defining identity and nilpotency.
/// Star operators are memoized per left argument; fills are idempotent and
/// mutex-guarded, so concurrent readers are fine.
class FlowGroup {
 public:
  explicit FlowGroup(PreLieAlgebra algebra);

  const PreLieAlgebra& algebra() const { return alg_; }
  std::uint32_t p() const { return alg_.p(); }
  std::uint32_t dim() const { return alg_.dim(); }
  /// Nilpotency index k of the source algebra.
  std::uint32_t index() const { return k_; }

  /// e^{L_a}(b) = sum_{m<k} L_a^m(b)/m!, exact and linear in b.
  FpVector exp_apply(const FpVector& a, const FpVector& b) const;
  /// e^{-L_a}(b), the inverse operator.
  FpVector exp_apply_neg(const FpVector& a, const FpVector& b) const;

  /// flow_exp(a) = a + a·a/2! + a·(a·a)/3! + ...  (the truncated exponential
  /// evaluated at the formal unit, with the unit never materialized).
  FpVector flow_exp(const FpVector& a) const;
  /// Compositional inverse of flow_exp, by fixed-point iteration
  /// x <- a - (flow_exp(x) - x); the result is verified to invert flow_exp.
  FpVector flow_log(const FpVector& a) const;

  /// a∘b = a + e^{L_{flow_log(a)}}(b); (A,+,∘) is a left brace.
  FpVector circ(const FpVector& a, const FpVector& b) const;
  FpVector star(const FpVector& a, const FpVector& b) const;
  /// Matrix of b -> a*b, memoized.
  FpMatrix star_matrix(const FpVector& a) const;
  /// ∘-inverse: e^{-L_{flow_log(a)}}(-a).
  FpVector circ_inverse(const FpVector& a) const;

 private:
  FpMatrix exp_of(const FpMatrix& L, bool negate) const;

  PreLieAlgebra alg_;
  std::uint32_t k_;
  bool memo_enabled_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, FpMatrix> star_memo_;
};

/// Pre-Lie algebra -> brace via the group of flows. Requires a verified
/// identity, nilpotency, and p > k. The brace axioms are spot-verified on a
/// small seeded sample. The stronger p > 2^k bound needed by the round-trip
/// statements is gated in the conversions below, not here.
Brace prelie_to_brace(const PreLieAlgebra& A, const RunConfig& cfg);

/// Brace -> pre-Lie algebra via the summation formula
///   a⊙b = -sum_{i=0}^{p-2} 2^{-i} ((2^i a) * b),
/// evaluated on basis pairs (left additivity makes that sufficient), with the
/// bilinearity of the result re-verified against direct element-level
/// evaluation on seeded samples and the defining identity checked. Requires
/// strong nilpotency of index k with 2^k < p; the index comes from
/// brace_chain(strong), which is sampled (and labeled) above the cap.
PreLieAlgebra brace_to_prelie(const Brace& B, const RunConfig& cfg);

/// Exploration variant: compute the same product but report hypothesis
/// violations instead of throwing (the gate 2^k < p is not enforced).
struct ForcedConversion {
  PreLieAlgebra algebra;
  std::vector<std::string> violations;
  std::optional<std::uint32_t> chain_index;
  bool chain_sampled = false;
};
ForcedConversion brace_to_prelie_forced(const Brace& B, const RunConfig& cfg);

struct RoundtripReport {
  bool ok = false;
  bool sampled = false;
  std::optional<std::uint32_t> algebra_index;
  std::optional<std::uint32_t> brace_index;
  std::string detail;  // first mismatch, when !ok
};

/// algebra -> flows brace -> algebra must return identical structure
/// constants, and the two nilpotency indexes must agree. Requires 2^k < p.
RoundtripReport roundtrip_algebra(const PreLieAlgebra& A, const RunConfig& cfg);

/// brace -> algebra -> flows brace must reproduce ∘ (exhaustively when the
/// order is within the cap, else on seeded samples), with equal indexes.
RoundtripReport roundtrip_brace(const Brace& B, const RunConfig& cfg);

}  // namespace braceforge
