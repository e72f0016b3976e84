#pragma once

#include <optional>
#include <string>

#include "braceforge/brace.hpp"
#include "braceforge/classify.hpp"
#include "braceforge/prelie.hpp"

namespace braceforge {

/// File formats are JSON, UTF-8, integers only (scalars are residues mod p).
///
/// prelie:  {"kind":"prelie","p":11,"dim":2,"c":[[[0,1],[0,0]],[[0,0],[0,0]]]}
///          where c[i][j] is the coordinate list of the basis product e_i·e_j.
/// brace:   {"kind":"brace","p":..,"dim":..,"backend":"table"|"ring"|"flows",
///           "star": [[rank,...],...] | "r": like c | "prelie": {...}}
///          Table entries are element ranks in mixed-radix order, least
///          significant coordinate first. A table brace over a mixed additive
///          group (distinct prime coordinate moduli) replaces "p"/"dim" with
///          "moduli":[2,3].
/// catalog: {"kind":"catalog","p":..,"records":[{"family":"a6","params":{...},
///           "c":...,"chain_dims":[...],"iso_rep":true},...]}

PreLieAlgebra parse_prelie(const std::string& json_text);
Brace parse_brace(const std::string& json_text);

std::string prelie_to_json(const PreLieAlgebra& A);
std::string brace_to_json(const Brace& B);
std::string catalog_to_json(const Catalog& cat);

PreLieAlgebra load_prelie_file(const std::string& path);
Brace load_brace_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Dispatch on the "kind" field. Exactly one of the results is set.
struct LoadedInput {
  std::optional<PreLieAlgebra> algebra;
  std::optional<Brace> brace;
};
LoadedInput load_input_file(const std::string& path);

}  // namespace braceforge
