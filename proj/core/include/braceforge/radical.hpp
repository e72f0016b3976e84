#pragma once

#include <cstdint>
#include <vector>

#include "braceforge/brace.hpp"
#include "braceforge/config.hpp"
#include "braceforge/subspace.hpp"

namespace braceforge {

/// Ideal test, standard definition: an additive subgroup I with
/// lambda_a(I) ⊆ I for every a in A and I normal in (A,∘). Both conditions
/// are checked exhaustively; |A| must be within cfg.exhaustive_cap.
bool is_ideal(const Brace& B, const FpSubspace& I, const RunConfig& cfg);

struct IdealChain {
  bool nilpotent = false;
  std::vector<FpSubspace> levels;  // levels[0] = I
};

/// I^{i+1} = span{a*b : a in I, b in basis(I^i)}; nilpotent iff it reaches 0.
IdealChain left_ideal_chain(const Brace& B, const FpSubspace& I, const RunConfig& cfg);
/// I^{(i+1)} = span{a*b : a in I^{(i)}, b in basis(I)}.
IdealChain right_ideal_chain(const Brace& B, const FpSubspace& I, const RunConfig& cfg);

bool is_left_nilpotent_ideal(const Brace& B, const FpSubspace& I, const RunConfig& cfg);

/// span(I ∪ J), asserting the sum is again a left nilpotent ideal (the
/// instance-level content of the sum theorem). A failing assertion reports
/// rather than throws: it would indicate an implementation bug.
struct IdealSumCheck {
  FpSubspace sum;
  bool sum_is_ideal = false;
  bool sum_left_nilpotent = false;
};
IdealSumCheck ideal_sum(const Brace& B, const FpSubspace& I, const FpSubspace& J,
                        const RunConfig& cfg);

/// span{x*s : x in X (all elements), s in basis(S)}. Right additivity makes
/// basis right-arguments exact; the left argument set is enumerated in full
/// (or sampled above the cap, flagged via *sampled).
FpSubspace star_span(const Brace& B, const FpSubspace& X, const FpSubspace& S,
                     const RunConfig& cfg, bool* sampled = nullptr);

/// The two inclusion lemmas for left nilpotent ideals I, J and an element c:
///   (I+J)*c ⊆ I*c + J*c + I*(J*c)
///   I*(J*c) ⊆ I*c + I*(-c) + I*(I*c) + J*(I*c) + I*(J*(I*c))
///            + I*(I*(-c)) + J*(I*(-c)) + I*(J*(I*(-c)))
struct InclusionCheck {
  bool first = false;
  bool second = false;
};
InclusionCheck check_star_inclusions(const Brace& B, const FpSubspace& I, const FpSubspace& J,
                                     const FpVector& c, const RunConfig& cfg);

struct RadicalReport {
  FpSubspace radical;
  std::size_t subspace_count = 0;
  std::size_t ideal_count = 0;
  /// For the left radical: all left nilpotent ideals. For the Wedderburn
  /// radical: all ideals that are both left and right nilpotent.
  std::vector<FpSubspace> summands;
  bool radical_is_ideal = false;
  bool radical_left_nilpotent = false;
  /// No summand escapes the radical (brute-force maximality).
  bool maximal = false;

  RadicalReport() : radical(FpSubspace::zero(2, 1)) {}
};

/// Largest left nilpotent ideal: the sum of all left nilpotent ideals,
/// found by exhaustive subspace enumeration.
RadicalReport left_nilpotent_radical(const Brace& B, const RunConfig& cfg);
/// Sum of all ideals that are both left and right nilpotent; asserted left
/// nilpotent.
RadicalReport wedderburn_radical(const Brace& B, const RunConfig& cfg);

/// Rank-set engine for mixed-moduli table braces (additive group a product
/// of distinct prime cyclic groups). Subgroups are sorted rank lists.
namespace smallbrace {

using Subgroup = std::vector<std::uint64_t>;

Subgroup closure(const Brace& B, Subgroup gens);
std::vector<Subgroup> enumerate_subgroups(const Brace& B);
bool is_ideal(const Brace& B, const Subgroup& I);
bool is_left_nilpotent_ideal(const Brace& B, const Subgroup& I);
bool is_right_nilpotent_ideal(const Brace& B, const Subgroup& I);
Subgroup subgroup_sum(const Brace& B, const Subgroup& I, const Subgroup& J);
bool inclusion_lemmas_hold(const Brace& B, const Subgroup& I, const Subgroup& J, std::uint64_t c);

struct MixedRadicalReport {
  Subgroup radical;
  std::size_t subgroup_count = 0;
  std::size_t ideal_count = 0;
  std::vector<Subgroup> summands;
  bool radical_is_ideal = false;
  bool radical_left_nilpotent = false;
  bool maximal = false;
};
MixedRadicalReport left_nilpotent_radical(const Brace& B);
MixedRadicalReport wedderburn_radical(const Brace& B);

}  // namespace smallbrace

}  // namespace braceforge
