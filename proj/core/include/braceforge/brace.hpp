#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "braceforge/chain.hpp"
#include "braceforge/config.hpp"
#include "braceforge/linalg.hpp"
#include "braceforge/prelie.hpp"

namespace braceforge {

class FlowGroup;

/// Star oracle backend of a brace.
enum class BraceBackend { table, ring, flows };

/// A finite left brace. The additive group is a product of prime cyclic
/// groups, one per coordinate; for the common F_p case all coordinate moduli
/// agree and the F_p^n machinery applies. a∘b = a + b + a*b throughout, with
/// the star operation dispatched to one of three backends:
///   table — dense star table indexed by mixed-radix element rank
///           (orders up to 4096 only),
///   ring  — associative structure constants, star is the bilinear product,
///   flows — a nilpotent pre-Lie algebra; star comes from its group of flows.
/// The group axioms of (A,∘) are validated by check_brace_axioms, not assumed
/// at construction (corrupted fixtures must stay loadable).
class Brace {
 public:
  static Brace from_table(std::vector<std::uint32_t> moduli, std::vector<std::uint32_t> star_ranks);
  static Brace from_ring(std::uint32_t p, std::uint32_t dim, std::vector<std::uint32_t> constants);
  static Brace from_flows(std::shared_ptr<const FlowGroup> flows);
  static Brace trivial(std::uint32_t p, std::uint32_t dim);

  BraceBackend backend() const { return backend_; }
  std::uint32_t dim() const { return static_cast<std::uint32_t>(moduli_.size()); }
  std::span<const std::uint32_t> moduli() const { return moduli_; }
  bool is_fp() const { return uniform_; }
  /// Uniform modulus; throws InputError for mixed-moduli table braces.
  std::uint32_t p() const;
  std::uint64_t order() const { return order_; }

  /// The ring constants (ring backend) or the source algebra (flows backend).
  std::span<const std::uint32_t> ring_constants() const;
  const FlowGroup& flows() const;
  /// Dense star table in rank form (table backend).
  std::span<const std::uint32_t> star_table() const;

  // Element-level operations for F_p braces.
  FpVector star(const FpVector& a, const FpVector& b) const;
  FpVector circ(const FpVector& a, const FpVector& b) const;
  FpVector lambda(const FpVector& a, const FpVector& b) const;  // a*b + b
  /// Matrix of b -> a*b. Star is right additive and right F_p-linear in
  /// every F_p-brace, so this operator captures star(a, ·) exactly.
  FpMatrix star_operator(const FpVector& a) const;
  /// The ∘-inverse of a. Flows backend uses the closed form; other backends
  /// iterate x <- -a - a*x (converges in left nilpotent braces) and table
  /// braces fall back to exhaustive search.
  FpVector circ_inverse(const FpVector& a) const;

  // Rank-level operations, valid for every backend (incl. mixed moduli).
  std::uint64_t star_rank(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t circ_rank(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t add_rank(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg_rank(std::uint64_t a) const;
  std::uint64_t circ_inverse_rank(std::uint64_t a) const;

 private:
  Brace() = default;

  BraceBackend backend_ = BraceBackend::ring;
  std::vector<std::uint32_t> moduli_;
  bool uniform_ = true;
  std::uint64_t order_ = 0;

  std::vector<std::uint32_t> table_;      // table backend: order x order ranks
  std::vector<std::uint32_t> ring_c_;     // ring backend: n^3 constants
  std::shared_ptr<const FlowGroup> flows_;
};

/// How a checker walks the argument space.
struct CheckMode {
  bool exhaustive = false;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0x5EED;

  static CheckMode exhaustive_mode() { return CheckMode{true, 0, 0}; }
  static CheckMode sampled(std::uint64_t count, std::uint64_t seed) {
    return CheckMode{false, count, seed};
  }
};

struct BraceViolation {
  std::string axiom;  // "brace-law" | "assoc" | "identity" | "inverse"
  FpVector a, b, c;
};

/// Validates the brace law a∘(b+c)+a = a∘b+a∘c, associativity of ∘, that 0
/// is the ∘-identity, and that sampled elements have ∘-inverses.
/// Exhaustive mode requires order^3 <= 10^8.
std::optional<BraceViolation> check_brace_axioms(const Brace& B, const CheckMode& mode);

/// Rank-level variant usable for mixed-moduli table braces.
struct BraceViolationRank {
  std::string axiom;
  std::uint64_t a, b, c;
};
std::optional<BraceViolationRank> check_brace_axioms_ranks(const Brace& B, const CheckMode& mode);

struct LinearityViolation {
  FpVector a, b;
  std::uint32_t alpha;
};

/// Right F_p-linearity of star: a*(αb) = α(a*b).
std::optional<LinearityViolation> check_fp_linearity(const Brace& B, const CheckMode& mode);

/// Radical chains. Left: A^{i+1} = A * A^i. Right: A^{(i+1)} = A^{(i)} * A.
/// Strong: A^{[i+1]} = sum_j A^{[j]} * A^{[i+1-j]}. Star is right additive,
/// so right arguments range over a basis; left arguments are not additive
/// and are enumerated in full up to cfg.exhaustive_cap elements, beyond
/// which a seeded sampled under-approximation is computed and labeled
/// (requires cfg.allow_sampled, else ResourceError).
ChainReport brace_chain(const Brace& B, ChainKind kind, const RunConfig& cfg);

/// The d-sequence d_0 = a, d_0' = b, d_{i+1} = d_i + d_i', d_{i+1}' = d_i * d_i'.
struct ExpansionSequence {
  std::vector<std::pair<FpVector, FpVector>> d;
};
ExpansionSequence expansion_sequence(const Brace& B, const FpVector& a, const FpVector& b,
                                     std::uint32_t steps);

struct ExpansionCheck {
  bool pass;
  FpVector lhs, rhs;
};

/// Exact check of the expansion of (a+b)*c against
///   a*c + b*c + sum_{i=0}^{2s} (-1)^{i+1} ((d_i*d_i')*c - d_i*(d_i'*c)),
/// truncated early once d_i' = 0. Requires a strongly nilpotent brace with
/// s-th left chain member zero.
ExpansionCheck check_sum_expansion(const Brace& B, const FpVector& a, const FpVector& b,
                                   const FpVector& c, std::uint32_t s);

/// Smallest subspace containing x and closed under star (closure under + is
/// structural; closure under ∘ follows). Left arguments enumerated in full
/// up to the cap, sampled above it with cfg.allow_sampled; a sampled closure
/// reaching the full space still certifies generation.
FpSubspace generated_subbrace(const Brace& B, const FpVector& x, const RunConfig& cfg);

}  // namespace braceforge
