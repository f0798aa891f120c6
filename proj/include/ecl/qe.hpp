// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecl/elementary.hpp"
#include "ecl/errors.hpp"
#include "ecl/euf.hpp"
#include "ecl/syntax.hpp"

namespace ecl {

namespace detail {

inline std::vector<Term> decomposition_terms(const Formula& psi, const std::vector<std::string>& bound_vars) {
  std::vector<Term> seeds;
  collect_terms(psi, seeds);
  // Bound variables always belong to theta: the witness needs a class of its own
  // even when psi does not mention it (this is what adds an element to an empty M).
  for (const auto& y : bound_vars) seeds.push_back(Term::var(y));
  return subterm_closure(seeds);
}

inline std::vector<std::string> free_of(const std::vector<Term>& theta, const std::vector<std::string>& free_vars,
                                        const std::vector<std::string>& bound_vars) {
  std::vector<std::string> out = free_vars;
  std::set<std::string> known(free_vars.begin(), free_vars.end());
  known.insert(bound_vars.begin(), bound_vars.end());
  for (const auto& t : theta)
    for (const auto& v : variables(t))
      if (known.insert(v).second) out.push_back(v);
  return out;
}

// Truth of a quantifier-free formula over theta once the partition and the
// relation bits are fixed.
inline bool eval_over_partition(const Formula& f, const ElementaryExistential& e,
                                const std::map<std::pair<std::string, std::vector<std::size_t>>, bool>& bits) {
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Equal:
      return e.classes[*e.index_of(f.terms()[0])] == e.classes[*e.index_of(f.terms()[1])];
    case FormulaKind::Atom: {
      std::vector<std::size_t> cls;
      for (const auto& t : f.terms()) cls.push_back(e.classes[*e.index_of(t)]);
      return bits.at({f.name(), cls});
    }
    case FormulaKind::Not:
      return !eval_over_partition(f.child(), e, bits);
    case FormulaKind::And:
      for (const auto& c : f.children())
        if (!eval_over_partition(c, e, bits)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& c : f.children())
        if (eval_over_partition(c, e, bits)) return true;
      return false;
    case FormulaKind::Implies:
      return !eval_over_partition(f.child(0), e, bits) || eval_over_partition(f.child(1), e, bits);
    case FormulaKind::Iff:
      return eval_over_partition(f.child(0), e, bits) == eval_over_partition(f.child(1), e, bits);
    default:
      throw InputError("expected a quantifier-free formula");
  }
}

}  // namespace detail

/// Every elementary existential description over the subterms of `psi` whose
/// induced truth assignment makes `psi` true. Epsilon is specified exactly on
/// the relation atoms occurring in `psi`.
inline std::vector<ElementaryExistential> elementary_decomposition(const Formula& psi,
                                                                   const std::vector<std::string>& free_vars,
                                                                   const std::vector<std::string>& bound_vars,
                                                                   const Limits& limits = {}) {
  if (!is_quantifier_free(psi)) throw InputError("elementary_decomposition expects a quantifier-free formula");
  std::vector<ElementaryExistential> out;
  if (psi.kind() == FormulaKind::False) return out;
  ElementaryExistential proto;
  proto.theta = detail::decomposition_terms(psi, bound_vars);
  proto.bound_vars = bound_vars;
  proto.free_vars = detail::free_of(proto.theta, free_vars, bound_vars);

  std::set<Formula> atom_set;
  collect_atoms(psi, atom_set);
  std::vector<RelationKey> keys;
  for (const auto& a : atom_set) {
    if (a.kind() != FormulaKind::Atom) continue;
    RelationKey k{a.name(), {}};
    for (const auto& t : a.terms()) k.args.push_back(*proto.index_of(t));
    keys.push_back(std::move(k));
  }

  for_each_congruence(
      proto.theta, {},
      [&](const Partition& p) {
        ElementaryExistential e = proto;
        e.classes = p;
        // One bit per distinct relation instance up to the partition.
        std::vector<std::pair<std::string, std::vector<std::size_t>>> slots;
        for (const auto& k : keys) {
          std::pair<std::string, std::vector<std::size_t>> s{k.relation, {}};
          for (std::size_t a : k.args) s.second.push_back(p[a]);
          if (std::find(slots.begin(), slots.end(), s) == slots.end()) slots.push_back(std::move(s));
        }
        if (slots.size() > 20) throw ResourceLimit("too many relation instances in one decomposition");
        for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
          std::map<std::pair<std::string, std::vector<std::size_t>>, bool> bits;
          for (std::size_t i = 0; i < slots.size(); ++i) bits[slots[i]] = (mask >> i) & 1;
          if (!detail::eval_over_partition(psi, e, bits)) continue;
          ElementaryExistential d = e;
          for (const auto& k : keys) {
            std::pair<std::string, std::vector<std::size_t>> s{k.relation, {}};
            for (std::size_t a : k.args) s.second.push_back(p[a]);
            d.epsilon[k] = bits.at(s);
          }
          out.push_back(std::move(d));
          if (out.size() > limits.max_disjuncts)
            throw ResourceLimit("decomposition exceeded max-disjuncts " + std::to_string(limits.max_disjuncts));
        }
        return true;
      },
      limits);
  return out;
}

// ---------------------------------------------------------------------------
// Simplification

namespace detail {

inline bool mentions(const Formula& f, const std::string& v) {
  std::set<std::string> bound, fv;
  free_variables(f, bound, fv);
  return fv.count(v) != 0;
}

inline Formula orient(const Formula& lit) {
  bool neg = lit.kind() == FormulaKind::Not;
  const Formula& a = neg ? lit.child() : lit;
  if (a.kind() != FormulaKind::Equal) return lit;
  const Term &l = a.terms()[0], &r = a.terms()[1];
  if (l == r) return neg ? Formula::falsity() : Formula::truth();
  if (r < l) {
    Formula flipped = Formula::equal(r, l);
    return neg ? Formula::negation(flipped) : flipped;
  }
  return lit;
}

inline Formula complement(const Formula& lit) {
  return lit.kind() == FormulaKind::Not ? lit.child() : Formula::negation(lit);
}

// Constant folding, orientation, duplicate removal, complementary literals;
// input is in negation normal form.
inline Formula fold(const Formula& f) {
  if (f.is_literal()) return orient(f);
  if (f.kind() != FormulaKind::And && f.kind() != FormulaKind::Or) return f;
  const bool conj = f.kind() == FormulaKind::And;
  std::set<Formula> parts;
  for (const auto& c : f.children()) {
    Formula g = fold(c);
    if (g.kind() == (conj ? FormulaKind::False : FormulaKind::True)) return g;
    if (g.kind() == (conj ? FormulaKind::True : FormulaKind::False)) continue;
    if (g.kind() == f.kind())
      parts.insert(g.children().begin(), g.children().end());
    else
      parts.insert(g);
  }
  for (const auto& p : parts)
    if (p.is_literal() && parts.count(complement(p))) return conj ? Formula::falsity() : Formula::truth();
  std::vector<Formula> v(parts.begin(), parts.end());
  return conj ? Formula::all_of(std::move(v)) : Formula::any_of(std::move(v));
}

inline std::vector<Formula> as_list(const Formula& f, FormulaKind kind) {
  if (f.kind() == kind) return f.children();
  return {f};
}

inline bool is_cube(const Formula& f) {
  if (f.is_literal()) return true;
  if (f.kind() != FormulaKind::And) return false;
  return std::all_of(f.children().begin(), f.children().end(), [](const Formula& c) { return c.is_literal(); });
}

// Drops EUF-inconsistent cubes and cubes subsumed by a smaller one.
inline Formula prune_cubes(const Formula& f) {
  auto disjuncts = as_list(f, FormulaKind::Or);
  if (!std::all_of(disjuncts.begin(), disjuncts.end(), is_cube)) return f;
  std::vector<std::set<Formula>> cubes;
  for (const auto& d : disjuncts) {
    auto lits = as_list(d, FormulaKind::And);
    if (!congruence_close(lits).consistent) continue;
    cubes.emplace_back(lits.begin(), lits.end());
  }
  std::sort(cubes.begin(), cubes.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<std::set<Formula>> kept;
  for (const auto& c : cubes) {
    bool subsumed = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
      return std::includes(c.begin(), c.end(), k.begin(), k.end());
    });
    if (!subsumed) kept.push_back(c);
  }
  std::vector<Formula> out;
  for (const auto& c : kept) out.push_back(Formula::all_of({c.begin(), c.end()}));
  std::sort(out.begin(), out.end());
  return Formula::any_of(std::move(out));
}

}  // namespace detail

/// Equivalence-preserving cleanup of a quantifier-free formula: constant
/// folding, duplicate and complementary literals, subsumed cubes. Formulas
/// over at most 24 atoms are also rewritten as a short disjunction of
/// irredundant cubes when that is no larger, which collapses valid and
/// unsatisfiable formulas to true and false.
inline Formula simplify_open(const Formula& f, const Limits& limits = {}) {
  if (!is_quantifier_free(f)) throw InputError("simplify_open expects a quantifier-free formula");
  Formula g = detail::prune_cubes(detail::fold(nnf(f)));
  if (g.kind() == FormulaKind::True || g.kind() == FormulaKind::False) return g;
  std::set<Formula> atoms;
  collect_atoms(g, atoms);
  if (atoms.size() > 24) return g;
  auto cover = implicant_cover(g, 64, true, limits);
  if (!cover) return g;
  std::vector<Formula> cubes;
  for (const auto& c : *cover) cubes.push_back(Formula::all_of(c));
  Formula d = detail::fold(Formula::any_of(std::move(cubes)));
  return size_of(d) <= size_of(g) ? d : g;
}

// ---------------------------------------------------------------------------
// Elimination

namespace detail {

// Disjunction of resultants of a conjunction of literals, all mentioning y.
inline std::vector<Formula> cube_resultants(const std::vector<Formula>& cube, const std::vector<std::string>& free_vars,
                                            const std::string& y, const Limits& limits) {
  Formula body = Formula::all_of(cube);
  ElementaryExistential proto;
  proto.theta = decomposition_terms(body, {y});
  proto.bound_vars = {y};
  proto.free_vars = free_of(proto.theta, free_vars, {y});
  if (proto.theta.size() > limits.max_theta)
    throw ResourceLimit("term set of size " + std::to_string(proto.theta.size()) + " exceeds max-theta " +
                        std::to_string(limits.max_theta));

  std::vector<PartitionConstraint> constraints;
  std::vector<std::pair<RelationKey, bool>> rel_literals;
  for (const auto& lit : cube) {
    bool positive = lit.kind() != FormulaKind::Not;
    const Formula& a = positive ? lit : lit.child();
    if (a.kind() == FormulaKind::Equal) {
      constraints.push_back({*proto.index_of(a.terms()[0]), *proto.index_of(a.terms()[1]), positive});
    } else if (a.kind() == FormulaKind::Atom) {
      RelationKey k{a.name(), {}};
      for (const auto& t : a.terms()) k.args.push_back(*proto.index_of(t));
      rel_literals.emplace_back(std::move(k), positive);
    } else if ((a.kind() == FormulaKind::True) != positive) {
      return {};
    }
  }

  std::vector<Formula> out;
  std::set<Formula> seen;
  for_each_congruence(
      proto.theta, constraints,
      [&](const Partition& p) {
        ElementaryExistential e = proto;
        e.classes = p;
        std::map<std::pair<std::string, std::vector<std::size_t>>, bool> by_class;
        for (const auto& [key, bit] : rel_literals) {
          std::vector<std::size_t> cls;
          for (std::size_t a : key.args) cls.push_back(p[a]);
          auto [it, inserted] = by_class.emplace(std::make_pair(key.relation, cls), bit);
          if (!inserted && it->second != bit) return true;
          e.epsilon[key] = bit;
        }
        Formula r = compute_star(e).star_formula;
        if (r.kind() == FormulaKind::False) return true;
        if (seen.insert(r).second) out.push_back(r);
        if (out.size() > limits.max_disjuncts)
          throw ResourceLimit("resultant exceeded max-disjuncts " + std::to_string(limits.max_disjuncts));
        return true;
      },
      limits);
  return out;
}

}  // namespace detail

/// Quantifier-free formula equivalent in EC_L to `exists y. psi`. The
/// matrix is split into irredundant cubes; literals without y leave the
/// quantifier and the rest go through the resultant construction.
inline Formula eliminate_one(const Formula& psi, const std::vector<std::string>& free_vars, const std::string& y,
                             const Limits& limits = {}) {
  if (!is_quantifier_free(psi)) throw InputError("eliminate_one expects a quantifier-free formula");
  // exists y. true holds in every existentially closed structure.
  Formula g = detail::fold(nnf(psi));
  if (g.kind() == FormulaKind::True || g.kind() == FormulaKind::False) return g;
  auto cover = implicant_cover(g, limits.max_disjuncts, false, limits);
  if (!cover) throw ResourceLimit("matrix needs more than max-disjuncts " + std::to_string(limits.max_disjuncts) + " cubes");
  std::vector<Formula> result;
  for (const auto& cube : *cover) {
    std::vector<Formula> outside, inside;
    for (const auto& lit : cube) (detail::mentions(lit, y) ? inside : outside).push_back(lit);
    // A literal y = t with t free of y lets t stand in for y directly.
    std::optional<Term> witness;
    for (const auto& lit : inside) {
      if (lit.kind() != FormulaKind::Equal || witness) continue;
      for (const auto& [a, b] : {std::pair{lit.terms()[0], lit.terms()[1]}, std::pair{lit.terms()[1], lit.terms()[0]}})
        if (a.is_var() && a.name() == y && !detail::mentions(Formula::equal(b, b), y)) witness = b;
    }
    if (witness) {
      for (const auto& lit : inside) outside.push_back(substitute(lit, Binding{{y, *witness}}));
      result.push_back(Formula::all_of(std::move(outside)));
      continue;
    }
    std::vector<Formula> res{Formula::truth()};
    if (!inside.empty()) res = detail::cube_resultants(inside, free_vars, y, limits);
    if (res.empty()) continue;
    outside.push_back(simplify_open(Formula::any_of(std::move(res)), limits));
    result.push_back(Formula::all_of(std::move(outside)));
  }
  return simplify_open(Formula::any_of(std::move(result)), limits);
}

/// Quantifier-free formula equivalent in EC_L to `f`, innermost quantifier first.
inline Formula eliminate(const Formula& f, const Limits& limits = {}) {
  switch (f.kind()) {
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      Formula body = eliminate(f.body(), limits);
      auto fv = free_variables(body);
      fv.erase(f.var());
      std::vector<std::string> free(fv.begin(), fv.end());
      if (f.kind() == FormulaKind::Exists) return eliminate_one(body, free, f.var(), limits);
      return simplify_open(Formula::negation(eliminate_one(Formula::negation(body), free, f.var(), limits)), limits);
    }
    case FormulaKind::Not:
      return simplify_open(Formula::negation(eliminate(f.child(), limits)), limits);
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(eliminate(c, limits));
      return simplify_open(f.kind() == FormulaKind::And ? Formula::conjunction(std::move(cs))
                                                        : Formula::disjunction(std::move(cs)),
                           limits);
    }
    case FormulaKind::Implies:
      return simplify_open(Formula::implies(eliminate(f.child(0), limits), eliminate(f.child(1), limits)), limits);
    case FormulaKind::Iff:
      return simplify_open(Formula::iff(eliminate(f.child(0), limits), eliminate(f.child(1), limits)), limits);
    default:
      return simplify_open(f, limits);
  }
}

}  // namespace ecl
