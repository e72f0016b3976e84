#include "braceforge/classify.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "braceforge/brace.hpp"
#include "braceforge/correspondence.hpp"

namespace braceforge {

std::string family_name(Family f) {
  switch (f) {
    case Family::a4: return "a4";
    case Family::a5: return "a5";
    case Family::a6: return "a6";
  }
  return "?";
}

namespace {

constexpr std::uint32_t kDim = 4;

// Builder for 4x4x4 structure-constant tables on a word basis
// e1 = x, e2 = x^2, e3, e4 (family-specific words).
struct TableBuilder {
  std::uint32_t p;
  std::vector<std::uint32_t> c;

  explicit TableBuilder(std::uint32_t p_) : p(p_), c(kDim * kDim * kDim, 0) {}

  void set(std::uint32_t i, std::uint32_t j, std::uint32_t k, std::uint32_t v) {
    c[(static_cast<std::size_t>(i) * kDim + j) * kDim + k] = v % p;
  }
};

// Keep only candidates passing the identity, the expected chain shape, and
// one-generatedness by e1; collapse identical tables, keeping the first
// parameter tuple.
struct FamilyFilter {
  Family family;
  std::vector<std::uint32_t> expected_dims;
  std::vector<ClassificationRecord> out;
  std::map<std::vector<std::uint32_t>, std::size_t> seen;

  void offer(PreLieAlgebra algebra, std::map<std::string, std::uint32_t> params,
             std::map<std::string, std::string> choices) {
    std::vector<std::uint32_t> key(algebra.constants().begin(), algebra.constants().end());
    if (seen.contains(key)) return;
    if (algebra.check_identity()) return;
    ChainReport chain = algebra.power_chain();
    if (chain.dims() != expected_dims) return;
    if (algebra.generated_by(FpVector::unit(algebra.p(), kDim, 0)).dim() != kDim) return;
    seen.emplace(std::move(key), out.size());
    out.push_back(ClassificationRecord{family, std::move(params), std::move(choices),
                                       std::move(algebra), chain.dims(), true, std::nullopt});
  }
};

}  // namespace

std::vector<ClassificationRecord> build_family_a4(std::uint32_t p) {
  require_prime(p);
  if (p <= 16) throw PreconditionError("family a4 needs p > 16");
  // Basis x, x^2, x^2·x, x·x^2; products of more than three factors vanish
  // and there are no other relations.
  TableBuilder t(p);
  t.set(0, 0, 1, 1);  // x·x = x^2
  t.set(1, 0, 2, 1);  // x^2·x
  t.set(0, 1, 3, 1);  // x·x^2
  FamilyFilter filter{Family::a4, {4, 3, 2, 0}, {}, {}};
  filter.offer(PreLieAlgebra(p, kDim, std::move(t.c)), {}, {});
  if (filter.out.size() != 1) throw Error("family a4 construction must yield exactly one record");
  return std::move(filter.out);
}

std::vector<ClassificationRecord> build_family_a5(std::uint32_t p) {
  require_prime(p);
  if (p <= 32) throw PreconditionError("family a5 needs p > 32");
  // Basis x, x^2, a, b with a in {x^2·x, x·x^2}, b in {a·x, x·a}; products of
  // five or more factors vanish; the four-factor products span F_p b; and for
  // (alpha, beta) != (0,0):  alpha(x·x^2) + beta(x^2·x) = 0 exactly (the
  // membership in the top chain member is imposed with zero component).
  // x^2·x^2 is pinned by (x^2·x)·x - (x·x^2)·x = x^2·x^2 - x·(x^2·x).
  FamilyFilter filter{Family::a5, {4, 3, 2, 1, 0}, {}, {}};

  for (int a_is_x2x = 1; a_is_x2x >= 0; --a_is_x2x) {
    for (int b_is_ax = 1; b_is_ax >= 0; --b_is_ax) {
      for (std::uint32_t lam = 0; lam < p; ++lam) {
        // lam is the coefficient tying the dependent three-factor word to the
        // basis word: for a = x^2·x it is x·x^2 = lam a (so (alpha, beta) =
        // (1, -lam) normalized); for a = x·x^2 it is x^2·x = lam a.
        TableBuilder t(p);
        t.set(0, 0, 1, 1);  // x^2
        std::uint32_t sigma;  // coefficient of b in x^2·x^2
        if (a_is_x2x) {
          t.set(1, 0, 2, 1);    // x^2·x = a
          t.set(0, 1, 2, lam);  // x·x^2 = lam a
          if (b_is_ax) {
            t.set(2, 0, 3, 1);  // a·x = b
            sigma = modp::sub(1, lam, p);
          } else {
            t.set(0, 2, 3, 1);  // x·a = b
            sigma = 1;
          }
        } else {
          t.set(0, 1, 2, 1);    // x·x^2 = a
          t.set(1, 0, 2, lam);  // x^2·x = lam a
          if (b_is_ax) {
            t.set(2, 0, 3, 1);  // a·x = b
            sigma = modp::sub(lam, 1, p);
          } else {
            t.set(0, 2, 3, 1);  // x·a = b
            sigma = lam;
          }
        }
        t.set(1, 1, 3, sigma);  // x^2·x^2 = sigma b

        std::map<std::string, std::uint32_t> params;
        if (a_is_x2x) {
          params = {{"alpha", 1}, {"beta", modp::neg(lam, p)}};
        } else {
          params = {{"alpha", modp::neg(lam, p)}, {"beta", 1}};
        }
        std::map<std::string, std::string> choices = {
            {"a", a_is_x2x ? "x2*x" : "x*x2"},
            {"b", b_is_ax ? "a*x" : "x*a"},
        };
        filter.offer(PreLieAlgebra(p, kDim, std::move(t.c)), std::move(params), std::move(choices));
      }
    }
  }
  return std::move(filter.out);
}

std::vector<ClassificationRecord> build_family_a6(std::uint32_t p) {
  require_prime(p);
  if (p <= 64) throw PreconditionError("family a6 needs p > 64");
  // Basis x, x^2, x^2·x, x^2·(x^2·x). Relations: x·(x·x^2) = (x·x^2)·x = 0;
  // x^2·x^2 = x·(x^2·x) - (x^2·x)·x; (x^2·x)·x = beta(x·(x·x^2));
  // x·(x^2·x) = gamma(x·(x·x^2)); x·x^2 = alpha(x^2·(x^2·x)); every other
  // product of five or more factors vanishes. beta and gamma multiply a word
  // the same list kills, so they are enumerated formally and the table
  // collapse reveals whether they matter.
  FamilyFilter filter{Family::a6, {4, 3, 2, 1, 1, 0}, {}, {}};
  for (std::uint32_t alpha = 0; alpha < p; ++alpha) {
    for (std::uint32_t beta = 0; beta < p; ++beta) {
      for (std::uint32_t gamma = 0; gamma < p; ++gamma) {
        TableBuilder t(p);
        t.set(0, 0, 1, 1);      // x^2
        t.set(1, 0, 2, 1);      // x^2·x
        t.set(0, 1, 3, alpha);  // x·x^2 = alpha e4
        t.set(1, 2, 3, 1);      // x^2·(x^2·x) = e4
        // (x^2·x)·x = beta * 0 and x·(x^2·x) = gamma * 0: the multiplied word
        // x·(x·x^2) is zero by the first relation.
        std::uint32_t zero_word = 0;
        t.set(2, 0, 3, modp::mul(beta, zero_word, p));
        t.set(0, 2, 3, modp::mul(gamma, zero_word, p));
        // x^2·x^2 = x·(x^2·x) - (x^2·x)·x, both already multiples of the zero
        // word, hence zero.
        t.set(1, 1, 3, modp::sub(modp::mul(gamma, zero_word, p), modp::mul(beta, zero_word, p), p));
        filter.offer(PreLieAlgebra(p, kDim, std::move(t.c)),
                     {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}}, {});
      }
    }
  }
  return std::move(filter.out);
}

namespace {

// Spanning product words of the generator, as binary trees over previously
// found words, shortest first. Returns indices (l, r) with -1 for the leaf.
struct WordBasis {
  std::vector<std::pair<int, int>> words;  // words[0] is the leaf
  std::vector<FpVector> vectors;           // values in the source algebra
  FpMatrix to_words;                       // basis change: e_i in word coordinates
};

std::optional<WordBasis> word_basis(const PreLieAlgebra& A, const FpVector& x) {
  std::uint32_t p = A.p(), n = A.dim();
  WordBasis wb{{{-1, -1}}, {x}, FpMatrix(p, n, n)};
  SpanBuilder span_acc(p, n);
  if (!span_acc.add(x)) return std::nullopt;
  std::vector<std::uint32_t> lengths{1};

  // Grow by total word length; within a length, by (left index, right index).
  for (std::uint32_t len = 2; span_acc.rank() < n && len <= 2 * n + 2; ++len) {
    std::size_t limit = wb.words.size();
    for (std::size_t l = 0; l < limit && span_acc.rank() < n; ++l) {
      for (std::size_t r = 0; r < limit && span_acc.rank() < n; ++r) {
        if (lengths[l] + lengths[r] != len) continue;
        FpVector v = A.multiply(wb.vectors[l], wb.vectors[r]);
        if (span_acc.add(v)) {
          wb.words.emplace_back(static_cast<int>(l), static_cast<int>(r));
          wb.vectors.push_back(std::move(v));
          lengths.push_back(len);
        }
      }
    }
  }
  if (span_acc.rank() != n) return std::nullopt;

  // Change of basis: express each e_i in the word vectors by inverting the
  // matrix whose columns are the word vectors.
  std::vector<std::vector<std::uint32_t>> m(n, std::vector<std::uint32_t>(2 * n, 0));
  for (std::uint32_t col = 0; col < n; ++col) {
    for (std::uint32_t row = 0; row < n; ++row) m[row][col] = wb.vectors[col][row];
  }
  for (std::uint32_t i = 0; i < n; ++i) m[i][n + i] = 1;
  std::uint32_t rank = 0;
  for (std::uint32_t col = 0; col < n && rank < n; ++col) {
    std::uint32_t piv = rank;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) continue;
    std::swap(m[piv], m[rank]);
    std::uint32_t inv = modp::inv(m[rank][col], p);
    for (auto& v : m[rank]) v = modp::mul(v, inv, p);
    for (std::uint32_t r2 = 0; r2 < n; ++r2) {
      if (r2 == rank || m[r2][col] == 0) continue;
      std::uint32_t f = m[r2][col];
      for (std::uint32_t j = 0; j < 2 * n; ++j) {
        m[r2][j] = modp::sub(m[r2][j], modp::mul(f, m[rank][j], p), p);
      }
    }
    ++rank;
  }
  if (rank != n) return std::nullopt;
  // Now m holds [I | W^{-1}] and e_i = sum_t (W^{-1})[t][i] w_t.
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t t = 0; t < n; ++t) wb.to_words.set(i, t, m[t][n + i]);
  }
  return wb;
}

// Evaluate the word list at y in B, in order.
std::vector<FpVector> eval_words(const WordBasis& wb, const PreLieAlgebra& B, const FpVector& y) {
  std::vector<FpVector> vals;
  vals.reserve(wb.words.size());
  for (const auto& [l, r] : wb.words) {
    if (l < 0) {
      vals.push_back(y);
    } else {
      vals.push_back(B.multiply(vals[static_cast<std::size_t>(l)], vals[static_cast<std::size_t>(r)]));
    }
  }
  return vals;
}

bool is_iso_witness(const WordBasis& wb, const PreLieAlgebra& A1, const PreLieAlgebra& A2,
                    const FpVector& y) {
  std::uint32_t p = A1.p(), n = A1.dim();
  std::vector<FpVector> images = eval_words(wb, A2, y);
  SpanBuilder rank_check(p, n);
  for (const auto& v : images) {
    if (!rank_check.add(v)) return false;  // images must stay independent
  }
  // phi(e_i) = sum_t to_words[i][t] * images[t]
  std::vector<FpVector> phi;
  phi.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    FpVector acc = FpVector::zero(p, n);
    for (std::uint32_t t = 0; t < n; ++t) acc = acc + images[t].scaled(wb.to_words.at(i, t));
    phi.push_back(std::move(acc));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      FpVector lhs = FpVector::zero(p, n);
      auto cij = A1.basis_product(i, j);
      for (std::uint32_t k = 0; k < n; ++k) lhs = lhs + phi[k].scaled(cij[k]);
      if (!(lhs == A2.multiply(phi[i], phi[j]))) return false;
    }
  }
  return true;
}

}  // namespace

IsoVerdict is_isomorphic_one_generated(const PreLieAlgebra& A1, const FpVector& x1,
                                       const PreLieAlgebra& A2, const RunConfig& cfg,
                                       bool exhaustive, FpVector* witness) {
  if (A1.p() != A2.p() || A1.dim() != A2.dim()) {
    throw InputError("isomorphism test needs matching (p, dim)");
  }
  std::uint32_t p = A1.p(), n = A1.dim();
  // Fast invariant: chain dims must agree.
  if (A1.power_chain().dims() != A2.power_chain().dims()) return IsoVerdict::distinct;

  auto wb = word_basis(A1, x1);
  if (!wb) throw InputError("isomorphism test: x1 does not generate A1");

  // Generators of A2 are exactly c*g0 + z with c != 0 and z in A2^2
  // (one-generated means the quotient by A2^2 is one-dimensional).
  ChainReport chain2 = A2.power_chain();
  const FpSubspace& sq = chain2.levels.at(1);
  if (sq.dim() + 1 != n) return IsoVerdict::distinct;  // not one-generated the same way
  FpVector g0 = FpVector::zero(p, n);
  {
    bool found = false;
    for (std::uint32_t i = 0; i < n && !found; ++i) {
      FpVector e = FpVector::unit(p, n, i);
      if (!sq.contains(e)) {
        g0 = e;
        found = true;
      }
    }
    if (!found) return IsoVerdict::distinct;
  }

  std::uint64_t z_count = sq.element_count();
  unsigned __int128 candidates = static_cast<unsigned __int128>(p - 1) * z_count;
  if (exhaustive || candidates <= cfg.exhaustive_cap) {
    if (exhaustive && candidates > (static_cast<unsigned __int128>(1) << 40)) {
      throw ResourceError("exhaustive isomorphism search too large");
    }
    bool hit = false;
    FpVector found = g0;
    for (std::uint32_t c = 1; c < p && !hit; ++c) {
      FpVector cg = g0.scaled(c);
      sq.for_each_element([&](std::span<const std::uint32_t> z) {
        if (hit) return;
        std::vector<std::uint32_t> yc(n);
        for (std::uint32_t i = 0; i < n; ++i) yc[i] = modp::add(cg[i], z[i], p);
        FpVector y(p, std::move(yc));
        if (is_iso_witness(*wb, A1, A2, y)) {
          hit = true;
          found = y;
        }
      });
    }
    if (hit) {
      if (witness) *witness = found;
      return IsoVerdict::isomorphic;
    }
    return IsoVerdict::distinct;
  }

  if (!cfg.allow_sampled) {
    throw ResourceError("isomorphism search exceeds exhaustive cap " +
                        std::to_string(cfg.exhaustive_cap) + " and sampling is not permitted");
  }
  // Stratified sampling: cycle the scalar c deterministically, sample z.
  Rng rng = derived_rng(cfg, "iso_sampled");
  for (std::uint64_t t = 0; t < cfg.sample_count; ++t) {
    std::uint32_t c = 1 + static_cast<std::uint32_t>(t % (p - 1));
    std::vector<std::uint32_t> yc(n);
    FpVector cg = g0.scaled(c);
    for (std::uint32_t i = 0; i < n; ++i) yc[i] = cg[i];
    for (std::size_t r = 0; r < sq.dim(); ++r) {
      std::uint32_t coef = rng.below(p);
      if (coef == 0) continue;
      const auto& row = sq.rows()[r];
      for (std::uint32_t i = 0; i < n; ++i) yc[i] = modp::add(yc[i], modp::mul(coef, row[i], p), p);
    }
    FpVector y(p, std::move(yc));
    if (is_iso_witness(*wb, A1, A2, y)) {
      if (witness) *witness = y;
      return IsoVerdict::isomorphic;
    }
  }
  return IsoVerdict::possibly_distinct;
}

namespace {

void verify_record_brace(const ClassificationRecord& rec, const RunConfig& cfg) {
  const PreLieAlgebra& A = rec.algebra;
  std::uint32_t p = A.p();
  Brace b = prelie_to_brace(A, cfg);

  CheckMode sampled = CheckMode::sampled(cfg.sample_count, cfg.seed ^ 0xCA7A);
  if (auto v = check_brace_axioms(b, sampled)) {
    throw Error("catalog brace failed axiom " + v->axiom + " (family " + family_name(rec.family) + ")");
  }
  if (check_fp_linearity(b, sampled)) {
    throw Error("catalog brace failed F_p-linearity (family " + family_name(rec.family) + ")");
  }
  ChainReport right = brace_chain(b, ChainKind::right, cfg);
  if (!right.index) throw Error("catalog brace is not right nilpotent");
  ChainReport strong = brace_chain(b, ChainKind::strong, cfg);
  if (!strong.index || *strong.index > 6) {
    throw Error("catalog brace strong index exceeds 6");
  }
  if (b.order() != static_cast<std::uint64_t>(p) * p * p * p) {
    throw Error("catalog brace has wrong cardinality");
  }
  FpSubspace gen = generated_subbrace(b, FpVector::unit(p, 4, 0), cfg);
  if (gen.dim() != 4) throw Error("catalog brace is not one-generated by the generator image");
  PreLieAlgebra back = brace_to_prelie(b, cfg);
  if (!(back == A)) {
    throw Error("conversion formula does not recover the catalog record exactly");
  }
}

}  // namespace

Catalog classify_p4(std::uint32_t p, const ClassifyOptions& opts, const RunConfig& cfg) {
  bool full = opts.a4 && opts.a5 && opts.a6;
  if (full && p <= 64) {
    throw PreconditionError("full p^4 catalog needs p > 64; single families run at their own bound");
  }
  Catalog cat;
  cat.p = p;
  cat.seed = cfg.seed;
  cat.iso_mode = opts.iso_exact ? "exact" : "sampled";

  if (opts.a4) {
    for (auto& r : build_family_a4(p)) cat.records.push_back(std::move(r));
  }
  if (opts.a5) {
    for (auto& r : build_family_a5(p)) cat.records.push_back(std::move(r));
  }
  if (opts.a6) {
    for (auto& r : build_family_a6(p)) cat.records.push_back(std::move(r));
  }

  // Iso-dedup, sequential in catalog order. Chain dims differ across
  // families, so dedup never crosses a family boundary.
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < cat.records.size(); ++i) {
    auto& rec = cat.records[i];
    FpVector x = FpVector::unit(p, 4, 0);
    for (std::size_t rep : reps) {
      const auto& prev = cat.records[rep];
      if (prev.family != rec.family || prev.chain_dims != rec.chain_dims) continue;
      IsoVerdict v =
          is_isomorphic_one_generated(rec.algebra, x, prev.algebra, cfg, opts.iso_exact, nullptr);
      if (v == IsoVerdict::isomorphic) {
        rec.iso_rep = false;
        rec.iso_of = rep;
        break;
      }
    }
    if (rec.iso_rep) reps.push_back(i);
  }

  // Effective parameters: vary one coordinate with the others fixed and see
  // whether the table moves. Probed on the representatives.
  auto probe_family = [&](Family fam, auto rebuild) {
    std::vector<std::string> effective;
    (void)rebuild;
    std::map<std::string, bool> moved;
    for (const auto& rec : cat.records) {
      if (rec.family != fam) continue;
      for (const auto& [name, value] : rec.params) {
        if (moved[name]) continue;
        auto probe_params = rec.params;
        probe_params[name] = (value + 1) % p;
        // Rebuild the candidate table with the probed parameters.
        PreLieAlgebra probed = rebuild(probe_params, rec.choices);
        if (!(probed == rec.algebra)) moved[name] = true;
      }
    }
    for (const auto& [name, m] : moved) {
      if (m) effective.push_back(name);
    }
    return effective;
  };

  if (opts.a6) {
    cat.effective_params["a6"] = probe_family(
        Family::a6, [&](const std::map<std::string, std::uint32_t>& prm,
                        const std::map<std::string, std::string>&) {
          std::uint32_t alpha = prm.at("alpha");
          // Rebuild exactly as build_family_a6 does; beta and gamma multiply
          // the zero word and leave no trace in the table.
          std::vector<std::uint32_t> cc(64, 0);
          auto set = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k, std::uint32_t v) {
            cc[(static_cast<std::size_t>(i) * 4 + j) * 4 + k] = v % p;
          };
          set(0, 0, 1, 1);
          set(1, 0, 2, 1);
          set(0, 1, 3, alpha);
          set(1, 2, 3, 1);
          return PreLieAlgebra(p, 4, cc);
        });
  }
  if (opts.a5) {
    cat.effective_params["a5"] = probe_family(
        Family::a5, [&](const std::map<std::string, std::uint32_t>& prm,
                        const std::map<std::string, std::string>& choices) {
          std::uint32_t alpha = prm.at("alpha"), beta = prm.at("beta");
          bool a_is_x2x = choices.at("a") == "x2*x";
          bool b_is_ax = choices.at("b") == "a*x";
          std::vector<std::uint32_t> cc(64, 0);
          auto set = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k, std::uint32_t v) {
            cc[(static_cast<std::size_t>(i) * 4 + j) * 4 + k] = v % p;
          };
          set(0, 0, 1, 1);
          std::uint32_t lam;
          if (a_is_x2x) {
            if (alpha == 0) return PreLieAlgebra::zero(p, 4);  // degenerate probe
            lam = modp::mul(modp::neg(beta, p), modp::inv(alpha, p), p);
            set(1, 0, 2, 1);
            set(0, 1, 2, lam);
          } else {
            if (beta == 0) return PreLieAlgebra::zero(p, 4);
            lam = modp::mul(modp::neg(alpha, p), modp::inv(beta, p), p);
            set(0, 1, 2, 1);
            set(1, 0, 2, lam);
          }
          std::uint32_t sigma;
          if (b_is_ax) {
            set(2, 0, 3, 1);
            sigma = a_is_x2x ? modp::sub(1, lam, p) : modp::sub(lam, 1, p);
          } else {
            set(0, 2, 3, 1);
            sigma = a_is_x2x ? 1 : lam;
          }
          set(1, 1, 3, sigma);
          return PreLieAlgebra(p, 4, cc);
        });
  }
  if (opts.a4) cat.effective_params["a4"] = {};

  // Verify every record's group of flows, in parallel with ordered results.
  std::vector<std::string> failures(cat.records.size());
  parallel_for(cat.records.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        verify_record_brace(cat.records[i], cfg);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  });
  for (const auto& f : failures) {
    if (!f.empty()) throw Error("catalog verification failed: " + f);
  }
  return cat;
}

}  // namespace braceforge
