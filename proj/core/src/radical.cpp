#include "braceforge/radical.hpp"

#include <algorithm>
#include <atomic>
#include <string>

namespace braceforge {

namespace {

std::vector<FpVector> subspace_elements(const FpSubspace& s) {
  std::vector<FpVector> out;
  out.reserve(s.element_count());
  s.for_each_element([&](std::span<const std::uint32_t> c) {
    out.emplace_back(s.p(), std::vector<std::uint32_t>(c.begin(), c.end()));
  });
  return out;
}

void require_within_cap(const Brace& B, const RunConfig& cfg, const char* what) {
  if (B.order() > cfg.exhaustive_cap) {
    throw ResourceError(std::string(what) + ": |A| = " + std::to_string(B.order()) +
                        " exceeds exhaustive cap " + std::to_string(cfg.exhaustive_cap));
  }
}

}  // namespace

bool is_ideal(const Brace& B, const FpSubspace& I, const RunConfig& cfg) {
  if (!B.is_fp()) throw InputError("subspace ideal test needs an F_p-brace");
  require_within_cap(B, cfg, "is_ideal");
  std::uint32_t p = B.p(), n = B.dim();
  if (I.p() != p || I.ambient_dim() != n) throw InputError("is_ideal: ambient mismatch");

  std::vector<FpVector> members = subspace_elements(I);
  std::vector<FpMatrix> member_ops;
  member_ops.reserve(members.size());
  for (const auto& x : members) member_ops.push_back(B.star_operator(x));

  std::vector<std::uint32_t> mods(B.moduli().begin(), B.moduli().end());
  std::uint64_t order = B.order();
  std::atomic<bool> bad{false};
  parallel_for(order, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> buf(n);
    for (std::uint64_t ra = begin; ra < end && !bad.load(std::memory_order_relaxed); ++ra) {
      FpVector a(p, unrank(ra, mods));
      FpMatrix op_a = B.star_operator(a);
      FpVector a_inv = B.circ_inverse(a);
      for (std::size_t xi = 0; xi < members.size(); ++xi) {
        const FpVector& x = members[xi];
        // lambda_a(x) = a*x + x
        FpVector lam = op_a.apply(x) + x;
        if (!I.contains(lam)) {
          bad.store(true, std::memory_order_relaxed);
          return;
        }
        // a ∘ x ∘ a^{-1}
        FpVector t = x + a_inv + member_ops[xi].apply(a_inv);
        FpVector conj = a + t + op_a.apply(t);
        if (!I.contains(conj)) {
          bad.store(true, std::memory_order_relaxed);
          return;
        }
      }
    }
  });
  return !bad.load();
}

FpSubspace star_span(const Brace& B, const FpSubspace& X, const FpSubspace& S,
                     const RunConfig& cfg, bool* sampled) {
  if (!B.is_fp()) throw InputError("star_span needs an F_p-brace");
  std::uint32_t p = B.p(), n = B.dim();
  SpanBuilder acc(p, n);
  if (X.dim() == 0 || S.dim() == 0) {
    if (sampled) *sampled = false;
    return acc.build();
  }
  std::vector<FpVector> rbasis;
  for (std::size_t i = 0; i < S.dim(); ++i) rbasis.push_back(S.basis_vector(i));

  bool did_sample = false;
  std::uint64_t count = X.element_count();
  if (count <= cfg.exhaustive_cap) {
    X.for_each_element([&](std::span<const std::uint32_t> coords) {
      FpVector a(p, std::vector<std::uint32_t>(coords.begin(), coords.end()));
      FpMatrix op = B.star_operator(a);
      for (const auto& b : rbasis) acc.add(op.apply(b));
    });
  } else {
    if (!cfg.allow_sampled) {
      throw ResourceError("star_span: " + std::to_string(count) + " left arguments exceed cap " +
                          std::to_string(cfg.exhaustive_cap) + " and sampling is not permitted");
    }
    did_sample = true;
    Rng rng = derived_rng(cfg, "star_span");
    const std::uint32_t stall_limit = 128;
    std::uint32_t stall = 0;
    for (std::uint64_t t = 0; t < cfg.sample_count && stall < stall_limit; ++t) {
      std::vector<std::uint32_t> coords(n, 0);
      for (std::size_t i = 0; i < X.dim(); ++i) {
        std::uint32_t coef = rng.below(p);
        if (coef == 0) continue;
        const auto& row = X.rows()[i];
        for (std::uint32_t j = 0; j < n; ++j) {
          coords[j] = modp::add(coords[j], modp::mul(coef, row[j], p), p);
        }
      }
      FpVector a(p, std::move(coords));
      FpMatrix op = B.star_operator(a);
      bool grew = false;
      for (const auto& b : rbasis) grew = acc.add(op.apply(b)) || grew;
      stall = grew ? 0 : stall + 1;
    }
  }
  if (sampled) *sampled = did_sample;
  return acc.build();
}

IdealChain left_ideal_chain(const Brace& B, const FpSubspace& I, const RunConfig& cfg) {
  IdealChain chain;
  chain.levels.push_back(I);
  for (std::uint32_t step = 0; step < 2 * B.dim() + 2; ++step) {
    FpSubspace next = star_span(B, I, chain.levels.back(), cfg);
    if (next.dim() == 0) {
      chain.levels.push_back(next);
      chain.nilpotent = true;
      return chain;
    }
    if (next == chain.levels.back()) {
      chain.levels.push_back(next);
      return chain;
    }
    chain.levels.push_back(next);
  }
  return chain;
}

IdealChain right_ideal_chain(const Brace& B, const FpSubspace& I, const RunConfig& cfg) {
  IdealChain chain;
  chain.levels.push_back(I);
  for (std::uint32_t step = 0; step < 2 * B.dim() + 2; ++step) {
    FpSubspace next = star_span(B, chain.levels.back(), I, cfg);
    if (next.dim() == 0) {
      chain.levels.push_back(next);
      chain.nilpotent = true;
      return chain;
    }
    if (next == chain.levels.back()) {
      chain.levels.push_back(next);
      return chain;
    }
    chain.levels.push_back(next);
  }
  return chain;
}

bool is_left_nilpotent_ideal(const Brace& B, const FpSubspace& I, const RunConfig& cfg) {
  return is_ideal(B, I, cfg) && left_ideal_chain(B, I, cfg).nilpotent;
}

IdealSumCheck ideal_sum(const Brace& B, const FpSubspace& I, const FpSubspace& J,
                        const RunConfig& cfg) {
  IdealSumCheck check{I.sum(J), false, false};
  check.sum_is_ideal = is_ideal(B, check.sum, cfg);
  check.sum_left_nilpotent = left_ideal_chain(B, check.sum, cfg).nilpotent;
  return check;
}

InclusionCheck check_star_inclusions(const Brace& B, const FpSubspace& I, const FpSubspace& J,
                                     const FpVector& c, const RunConfig& cfg) {
  std::uint32_t p = B.p(), n = B.dim();
  auto vec_span = [&](const FpVector& v) {
    SpanBuilder b(p, n);
    b.add(v);
    return b.build();
  };

  FpSubspace c_span = vec_span(c);
  FpSubspace neg_c_span = vec_span(-c);

  FpSubspace Ic = star_span(B, I, c_span, cfg);
  FpSubspace Jc = star_span(B, J, c_span, cfg);
  FpSubspace IJc = star_span(B, I, Jc, cfg);

  InclusionCheck result;
  FpSubspace lhs1 = star_span(B, I.sum(J), c_span, cfg);
  result.first = Ic.sum(Jc).sum(IJc).contains_subspace(lhs1);

  FpSubspace Inc = star_span(B, I, neg_c_span, cfg);
  FpSubspace IIc = star_span(B, I, Ic, cfg);
  FpSubspace JIc = star_span(B, J, Ic, cfg);
  FpSubspace IJIc = star_span(B, I, JIc, cfg);
  FpSubspace IInc = star_span(B, I, Inc, cfg);
  FpSubspace JInc = star_span(B, J, Inc, cfg);
  FpSubspace IJInc = star_span(B, I, JInc, cfg);
  FpSubspace rhs2 = Ic.sum(Inc).sum(IIc).sum(JIc).sum(IJIc).sum(IInc).sum(JInc).sum(IJInc);
  result.second = rhs2.contains_subspace(IJc);
  return result;
}

namespace {

RadicalReport radical_of(const Brace& B, const RunConfig& cfg, bool wedderburn) {
  if (!B.is_fp()) throw InputError("subspace radical needs an F_p-brace; use the rank engine");
  require_within_cap(B, cfg, "radical");
  std::uint32_t p = B.p(), n = B.dim();

  RadicalReport rep;
  rep.radical = FpSubspace::zero(p, n);

  std::vector<FpSubspace> candidates = enumerate_subspaces(p, n, 1000000);
  rep.subspace_count = candidates.size();

  // Parallel filter with ordered merge.
  std::vector<std::uint8_t> ideal_flag(candidates.size(), 0), summand_flag(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!is_ideal(B, candidates[i], cfg)) continue;
      ideal_flag[i] = 1;
      bool left = left_ideal_chain(B, candidates[i], cfg).nilpotent;
      bool keep = wedderburn ? (left && right_ideal_chain(B, candidates[i], cfg).nilpotent) : left;
      if (keep) summand_flag[i] = 1;
    }
  });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (ideal_flag[i]) ++rep.ideal_count;
    if (summand_flag[i]) {
      rep.summands.push_back(candidates[i]);
      rep.radical = rep.radical.sum(candidates[i]);
    }
  }

  rep.radical_is_ideal = is_ideal(B, rep.radical, cfg);
  rep.radical_left_nilpotent = left_ideal_chain(B, rep.radical, cfg).nilpotent;
  rep.maximal = std::all_of(rep.summands.begin(), rep.summands.end(), [&](const FpSubspace& s) {
    return rep.radical.contains_subspace(s);
  });
  return rep;
}

}  // namespace

RadicalReport left_nilpotent_radical(const Brace& B, const RunConfig& cfg) {
  return radical_of(B, cfg, /*wedderburn=*/false);
}

RadicalReport wedderburn_radical(const Brace& B, const RunConfig& cfg) {
  return radical_of(B, cfg, /*wedderburn=*/true);
}

namespace smallbrace {

namespace {

void require_small(const Brace& B) {
  if (B.order() > 4096) throw ResourceError("rank-set engine limited to order 4096");
}

bool contains(const Subgroup& s, std::uint64_t r) {
  return std::binary_search(s.begin(), s.end(), r);
}

}  // namespace

Subgroup closure(const Brace& B, Subgroup gens) {
  require_small(B);
  std::vector<std::uint8_t> in(B.order(), 0);
  std::vector<std::uint64_t> queue;
  auto push = [&](std::uint64_t r) {
    if (!in[r]) {
      in[r] = 1;
      queue.push_back(r);
    }
  };
  push(0);
  for (auto g : gens) push(g);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint64_t a = queue[head];
    push(B.neg_rank(a));
    for (std::size_t other = 0; other <= head; ++other) {
      push(B.add_rank(a, queue[other]));
    }
  }
  Subgroup out;
  for (std::uint64_t r = 0; r < B.order(); ++r) {
    if (in[r]) out.push_back(r);
  }
  return out;
}

std::vector<Subgroup> enumerate_subgroups(const Brace& B) {
  require_small(B);
  std::vector<Subgroup> found{closure(B, {})};
  for (std::size_t head = 0; head < found.size(); ++head) {
    Subgroup base = found[head];
    for (std::uint64_t g = 0; g < B.order(); ++g) {
      if (contains(base, g)) continue;
      Subgroup gens = base;
      gens.push_back(g);
      Subgroup bigger = closure(B, std::move(gens));
      if (std::find(found.begin(), found.end(), bigger) == found.end()) {
        found.push_back(std::move(bigger));
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return found;
}

bool is_ideal(const Brace& B, const Subgroup& I) {
  require_small(B);
  for (std::uint64_t a = 0; a < B.order(); ++a) {
    std::uint64_t a_inv = B.circ_inverse_rank(a);
    for (auto x : I) {
      std::uint64_t lam = B.add_rank(B.star_rank(a, x), x);
      if (!contains(I, lam)) return false;
      std::uint64_t conj = B.circ_rank(B.circ_rank(a, x), a_inv);
      if (!contains(I, conj)) return false;
    }
  }
  return true;
}

namespace {

Subgroup star_set(const Brace& B, const Subgroup& X, const Subgroup& Y) {
  std::vector<std::uint64_t> prods;
  for (auto a : X) {
    for (auto b : Y) prods.push_back(B.star_rank(a, b));
  }
  return closure(B, std::move(prods));
}

}  // namespace

bool is_left_nilpotent_ideal(const Brace& B, const Subgroup& I) {
  Subgroup level = I;
  for (std::size_t step = 0; step <= I.size() + 1; ++step) {
    Subgroup next = star_set(B, I, level);
    if (next.size() == 1) return true;  // just {0}
    if (next == level) return false;
    level = std::move(next);
  }
  return false;
}

bool is_right_nilpotent_ideal(const Brace& B, const Subgroup& I) {
  Subgroup level = I;
  for (std::size_t step = 0; step <= I.size() + 1; ++step) {
    Subgroup next = star_set(B, level, I);
    if (next.size() == 1) return true;
    if (next == level) return false;
    level = std::move(next);
  }
  return false;
}

Subgroup subgroup_sum(const Brace& B, const Subgroup& I, const Subgroup& J) {
  Subgroup gens = I;
  gens.insert(gens.end(), J.begin(), J.end());
  return closure(B, std::move(gens));
}

bool inclusion_lemmas_hold(const Brace& B, const Subgroup& I, const Subgroup& J, std::uint64_t c) {
  Subgroup c_set{c}, neg_c_set{B.neg_rank(c)};
  auto subset = [](const Subgroup& small, const Subgroup& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };
  Subgroup Ic = star_set(B, I, c_set);
  Subgroup Jc = star_set(B, J, c_set);
  Subgroup IJc = star_set(B, I, Jc);
  Subgroup lhs1 = star_set(B, subgroup_sum(B, I, J), c_set);
  bool first = subset(lhs1, subgroup_sum(B, subgroup_sum(B, Ic, Jc), IJc));

  Subgroup Inc = star_set(B, I, neg_c_set);
  Subgroup IIc = star_set(B, I, Ic);
  Subgroup JIc = star_set(B, J, Ic);
  Subgroup IJIc = star_set(B, I, JIc);
  Subgroup IInc = star_set(B, I, Inc);
  Subgroup JInc = star_set(B, J, Inc);
  Subgroup IJInc = star_set(B, I, JInc);
  Subgroup rhs2 = subgroup_sum(B, Ic, Inc);
  rhs2 = subgroup_sum(B, rhs2, IIc);
  rhs2 = subgroup_sum(B, rhs2, JIc);
  rhs2 = subgroup_sum(B, rhs2, IJIc);
  rhs2 = subgroup_sum(B, rhs2, IInc);
  rhs2 = subgroup_sum(B, rhs2, JInc);
  rhs2 = subgroup_sum(B, rhs2, IJInc);
  bool second = subset(IJc, rhs2);
  return first && second;
}

namespace {

MixedRadicalReport mixed_radical_of(const Brace& B, bool wedderburn) {
  MixedRadicalReport rep;
  std::vector<Subgroup> subs = enumerate_subgroups(B);
  rep.subgroup_count = subs.size();
  rep.radical = Subgroup{0};
  for (const auto& s : subs) {
    if (!is_ideal(B, s)) continue;
    ++rep.ideal_count;
    bool left = is_left_nilpotent_ideal(B, s);
    bool keep = wedderburn ? (left && is_right_nilpotent_ideal(B, s)) : left;
    if (keep) {
      rep.summands.push_back(s);
      rep.radical = subgroup_sum(B, rep.radical, s);
    }
  }
  rep.radical_is_ideal = is_ideal(B, rep.radical);
  rep.radical_left_nilpotent = is_left_nilpotent_ideal(B, rep.radical) || rep.radical.size() == 1;
  rep.maximal = std::all_of(rep.summands.begin(), rep.summands.end(), [&](const Subgroup& s) {
    return std::includes(rep.radical.begin(), rep.radical.end(), s.begin(), s.end());
  });
  return rep;
}

}  // namespace

MixedRadicalReport left_nilpotent_radical(const Brace& B) {
  return mixed_radical_of(B, /*wedderburn=*/false);
}

MixedRadicalReport wedderburn_radical(const Brace& B) {
  return mixed_radical_of(B, /*wedderburn=*/true);
}

}  // namespace smallbrace

}  // namespace braceforge
