// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ecl/elementary.hpp"
#include "ecl/euf.hpp"
#include "ecl/structures.hpp"
#include "ecl/syntax.hpp"
#include "ecl/trep.hpp"

// Seeded generators for property tests and oracle suites. Draws go through
// Rng::below, which is plain modular reduction of the 64-bit engine output,
// so sequences are identical across standard library implementations.

namespace ecl {

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct SignatureShape {
  std::size_t max_symbols = 2;
  std::size_t max_arity = 2;
  bool relations = true;
  bool constants = true;
};

/// One to max_symbols symbols named F, G, c, d, P, Q by kind.
inline Signature random_signature(Rng& rng, const SignatureShape& shape = {}) {
  Signature sig;
  std::size_t count = 1 + rng.below(shape.max_symbols);
  std::vector<std::string> fnames{"F", "G", "H", "K"}, cnames{"c", "d", "e", "k"}, rnames{"P", "Q", "R", "T"};
  std::size_t nf = 0, nc = 0, nr = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t arity = rng.below(shape.max_arity + 1);
    bool relation = shape.relations && rng.chance(1, 3);
    if (relation) {
      sig.add_relation(rnames[nr++ % rnames.size()], arity);
    } else if (arity == 0) {
      if (!shape.constants) arity = 1 + rng.below(std::max<std::size_t>(shape.max_arity, 1));
      if (arity == 0)
        sig.add_constant(cnames[nc++ % cnames.size()]);
      else
        sig.add_function(fnames[nf++ % fnames.size()], arity);
    } else {
      sig.add_function(fnames[nf++ % fnames.size()], arity);
    }
  }
  return sig;
}

inline FiniteStructure random_structure(Rng& rng, const Signature& sig, std::size_t size) {
  if (size == 0 && sig.has_constants()) size = 1;
  FiniteStructure m(sig, size);
  for (const auto& [name, info] : sig.symbols()) {
    if (info.kind == SymbolKind::Function)
      for (auto& v : m.mutable_function_table(name)) v = rng.below(size);
    else
      for (auto& v : m.mutable_relation_table(name)) v = rng.chance(1, 2) ? 1 : 0;
  }
  return m;
}

inline Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& vars, std::size_t depth) {
  std::vector<std::pair<std::string, std::size_t>> fns;
  for (const auto& [name, info] : sig.symbols())
    if (info.kind == SymbolKind::Function && (depth > 0 || info.arity == 0)) fns.emplace_back(name, info.arity);
  const bool leaf_var = !vars.empty() && (fns.empty() || rng.chance(1, 2));
  if (leaf_var) return Term::var(rng.pick(vars));
  if (fns.empty()) throw InputError("cannot build a term: no variables and no constants");
  auto [name, arity] = rng.pick(fns);
  std::vector<Term> args;
  for (std::size_t i = 0; i < arity; ++i) args.push_back(random_term(rng, sig, vars, depth - 1));
  return Term::app(name, std::move(args));
}

inline bool can_build_terms(const Signature& sig, const std::vector<std::string>& vars) {
  return !vars.empty() || sig.has_constants();
}

inline Formula random_atom(Rng& rng, const Signature& sig, const std::vector<std::string>& vars, std::size_t depth) {
  auto rels = sig.relations();
  if (!can_build_terms(sig, vars)) {
    std::vector<std::string> props;
    for (const auto& r : rels)
      if (sig.lookup(r)->arity == 0) props.push_back(r);
    if (props.empty()) return rng.chance(1, 2) ? Formula::truth() : Formula::falsity();
    return Formula::atom(rng.pick(props));
  }
  if (!rels.empty() && rng.chance(1, 3)) {
    const std::string& r = rng.pick(rels);
    std::vector<Term> args;
    for (std::size_t i = 0; i < sig.lookup(r)->arity; ++i) args.push_back(random_term(rng, sig, vars, depth));
    return Formula::atom(r, std::move(args));
  }
  return Formula::equal(random_term(rng, sig, vars, depth), random_term(rng, sig, vars, depth));
}

inline Formula random_literal(Rng& rng, const Signature& sig, const std::vector<std::string>& vars, std::size_t depth) {
  Formula a = random_atom(rng, sig, vars, depth);
  return rng.chance(1, 2) ? Formula::negation(a) : a;
}

/// Quantifier-free formula with `connectives` binary connectives.
inline Formula random_open(Rng& rng, const Signature& sig, const std::vector<std::string>& vars,
                           std::size_t connectives, std::size_t term_depth = 1) {
  if (connectives == 0) return random_literal(rng, sig, vars, term_depth);
  std::size_t left = rng.below(connectives);
  Formula a = random_open(rng, sig, vars, left, term_depth);
  Formula b = random_open(rng, sig, vars, connectives - 1 - left, term_depth);
  switch (rng.below(4)) {
    case 0:
      return Formula::conjunction({a, b});
    case 1:
      return Formula::disjunction({a, b});
    case 2:
      return Formula::implies(a, b);
    default:
      return rng.chance(1, 4) ? Formula::iff(a, b) : Formula::negation(Formula::conjunction({a, b}));
  }
}

struct SentenceShape {
  std::size_t quantifiers = 2;
  std::size_t connectives = 2;
  std::size_t term_depth = 1;
};

/// A sentence with a random prenex-free nesting of quantifiers.
inline Formula random_sentence(Rng& rng, const Signature& sig, const SentenceShape& shape = {}) {
  std::vector<std::string> names{"x", "y", "z", "u", "v", "w"};
  std::vector<std::string> vars(names.begin(), names.begin() + std::min(shape.quantifiers, names.size()));
  Formula body = random_open(rng, sig, vars, shape.connectives, shape.term_depth);
  // Close over the variables that occur, in a random order, with random quantifiers.
  std::vector<std::string> occurring;
  for (const auto& v : free_variables(body)) occurring.push_back(v);
  for (std::size_t i = occurring.size(); i > 1; --i) std::swap(occurring[i - 1], occurring[rng.below(i)]);
  for (const auto& v : occurring) {
    if (rng.chance(1, 3) && body.kind() != FormulaKind::Exists && body.kind() != FormulaKind::Forall) {
      Formula side = random_literal(rng, sig, {v}, 0);
      body = rng.chance(1, 2) ? Formula::conjunction({side, body}) : Formula::disjunction({side, body});
    }
    body = rng.chance(1, 2) ? Formula::exists(v, body) : Formula::forall(v, body);
  }
  return body;
}

/// A random congruence on `theta` (subterm-closed, term-ordered): random
/// merges followed by congruence closure.
inline Partition random_congruence(Rng& rng, const std::vector<Term>& theta) {
  const std::size_t n = theta.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  std::size_t merges = n == 0 ? 0 : rng.below(n);
  for (std::size_t k = 0; k < merges; ++k) unite(rng.below(n), rng.below(n));
  std::map<Term, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(theta[i], i);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Term &s = theta[i], &t = theta[j];
        if (!s.is_app() || !t.is_app() || s.name() != t.name() || s.arity() != t.arity() || find(i) == find(j)) continue;
        bool congruent = true;
        for (std::size_t k = 0; k < s.arity() && congruent; ++k)
          congruent = find(index.at(s.args()[k])) == find(index.at(t.args()[k]));
        if (congruent) {
          unite(i, j);
          changed = true;
        }
      }
  }
  Partition p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = find(i);
  return canonical_partition(p);
}

/// A random valid elementary existential formula over `sig` with the given
/// variables and at most `max_theta` terms.
inline ElementaryExistential random_elementary(Rng& rng, const Signature& sig, const std::vector<std::string>& free_vars,
                                               const std::vector<std::string>& bound_vars, std::size_t max_theta) {
  std::vector<std::string> vars = free_vars;
  vars.insert(vars.end(), bound_vars.begin(), bound_vars.end());
  std::vector<Term> seeds;
  for (const auto& v : vars) seeds.push_back(Term::var(v));
  std::vector<Term> theta = subterm_closure(seeds);
  std::size_t attempts = 2 + rng.below(4);
  for (std::size_t k = 0; k < attempts && can_build_terms(sig, vars); ++k) {
    std::vector<Term> grown = theta;
    grown.push_back(random_term(rng, sig, vars, 1 + rng.below(2)));
    grown = subterm_closure(grown);
    if (grown.size() <= max_theta) theta = grown;
  }
  ElementaryExistential e;
  e.theta = theta;
  e.free_vars = free_vars;
  e.bound_vars = bound_vars;
  e.classes = random_congruence(rng, theta);
  // Epsilon: a few random relation instances, consistent across the partition.
  std::map<std::pair<std::string, std::vector<std::size_t>>, bool> by_class;
  for (const auto& r : sig.relations()) {
    std::size_t arity = sig.lookup(r)->arity;
    if (theta.empty() && arity > 0) continue;
    std::size_t count = rng.below(4);
    for (std::size_t k = 0; k < count; ++k) {
      RelationKey key{r, {}};
      std::vector<std::size_t> cls;
      for (std::size_t i = 0; i < arity; ++i) {
        key.args.push_back(rng.below(theta.size()));
        cls.push_back(e.classes[key.args.back()]);
      }
      auto [it, inserted] = by_class.emplace(std::make_pair(r, cls), rng.chance(1, 2));
      e.epsilon[key] = it->second;
    }
  }
  return e;
}

/// Random representability tables: 1 to 4 numerals, up to two function
/// tables and one predicate table, each partially filled.
inline RepTables random_tables(Rng& rng) {
  RepTables t;
  t.numerals = 1 + rng.below(4);
  auto tuple = [&](std::size_t arity) {
    std::vector<std::size_t> a;
    for (std::size_t i = 0; i < arity; ++i) a.push_back(rng.below(t.numerals));
    return a;
  };
  std::vector<std::string> fnames{"G", "H"};
  for (std::size_t k = 0, n = rng.below(3); k < n; ++k) {
    FunctionTable f{1 + rng.below(2), {}};
    for (std::size_t e = 0, m = 1 + rng.below(4); e < m; ++e) f.entries.emplace(tuple(f.arity), rng.below(t.numerals));
    t.functions.emplace(fnames[k], std::move(f));
  }
  if (rng.chance(1, 2)) {
    PredicateTable p{1 + rng.below(2), {}, {}};
    for (std::size_t e = 0, m = 1 + rng.below(4); e < m; ++e) {
      auto a = tuple(p.arity);
      if (!p.positive.count(a) && !p.negative.count(a)) (rng.chance(1, 2) ? p.positive : p.negative).insert(a);
    }
    t.predicates.emplace("P", std::move(p));
  }
  return t;
}

}  // namespace ecl
