#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "braceforge/config.hpp"
#include "braceforge/prelie.hpp"

namespace braceforge {

/// The three one-generated families of dimension 4, tagged by where the
/// power chain terminates: a6 (A^5 != 0, A^6 = 0), a5 (A^4 != 0, A^5 = 0),
/// a4 (A^4 = 0).
enum class Family { a4, a5, a6 };

std::string family_name(Family f);

/// One catalog entry: a parameterized structure-constant table on the word
/// basis of the designated generator x (always the first basis vector),
/// surviving the identity, chain-shape and one-generatedness filters.
struct ClassificationRecord {
  Family family;
  std::map<std::string, std::uint32_t> params;   // alpha / beta / gamma values
  std::map<std::string, std::string> choices;    // discrete word choices (a5)
  PreLieAlgebra algebra;
  std::vector<std::uint32_t> chain_dims;
  bool iso_rep = true;
  std::optional<std::size_t> iso_of;  // index of the representative, when merged
};

/// Family constructors. Candidates realize the family's relation lists; the
/// identity checker plus chain-shape and one-generatedness filters arbitrate
/// well-definedness. Identical structure-constant tables produced by
/// different parameter tuples are collapsed, keeping the first tuple.
std::vector<ClassificationRecord> build_family_a4(std::uint32_t p);  // p > 16
std::vector<ClassificationRecord> build_family_a5(std::uint32_t p);  // p > 32
std::vector<ClassificationRecord> build_family_a6(std::uint32_t p);  // p > 64

enum class IsoVerdict { isomorphic, distinct, possibly_distinct };

/// Isomorphism test for one-generated algebras by generator-image search:
/// a spanning word basis of A1's generator is evaluated on candidate images
/// y in A2; a hit must send basis products to basis products. Exhaustive
/// below the cap (verdict distinct is then definitive); sampled above it
/// with a possibly_distinct verdict. Candidates range over c*g + z with
/// c != 0 and z in A2^2, which is exactly the generator set.
IsoVerdict is_isomorphic_one_generated(const PreLieAlgebra& A1, const FpVector& x1,
                                       const PreLieAlgebra& A2, const RunConfig& cfg,
                                       bool exhaustive, FpVector* witness = nullptr);

struct Catalog {
  std::uint32_t p = 0;
  std::string iso_mode;  // "exact" | "sampled"
  std::uint64_t seed = 0;
  std::vector<ClassificationRecord> records;
  /// Per family, the parameters whose variation (others fixed) changes the
  /// structure constants.
  std::map<std::string, std::vector<std::string>> effective_params;
};

struct ClassifyOptions {
  bool a4 = true, a5 = true, a6 = true;
  bool iso_exact = false;  // exhaustive generator search during dedup
};

/// Full catalog: construct the requested families, dedup isomorphic records
/// (chain dims as a fast pre-filter, then generator-image search), and
/// verify every record's group of flows: sampled brace axioms and
/// F_p-linearity, right nilpotency, strong index <= 6, cardinality p^4,
/// brace one-generatedness, and bit-exact recovery of the record's
/// constants by the conversion formula. Any failure throws.
/// The full catalog needs p > 64; single families run at their own bound
/// (the returned catalog notes nothing — callers see the family flags).
Catalog classify_p4(std::uint32_t p, const ClassifyOptions& opts, const RunConfig& cfg);

}  // namespace braceforge
