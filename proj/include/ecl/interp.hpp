// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ecl/decide.hpp"
#include "ecl/errors.hpp"
#include "ecl/euf.hpp"
#include "ecl/sexpr.hpp"
#include "ecl/structures.hpp"
#include "ecl/syntax.hpp"
#include "ecl/text.hpp"

// One-piece, parameter-free relative translations. Member formulas and terms
// are written over the parameters x0, x1, ...: a k-ary relation of an
// n-dimensional translation uses x0..x(kn-1), a graph-defined function
// x0..x((k+1)n-1) with the value block last, the domain formula x0..x(n-1)
// and the equality formula x0..x(2n-1).

namespace ecl {

struct FunctionTranslation {
  enum class Kind { Terms, Graph };
  Kind kind = Kind::Terms;
  std::vector<Term> terms;  // n terms when kind == Terms
  Formula graph = Formula::truth();

  static FunctionTranslation by_terms(std::vector<Term> ts) { return {Kind::Terms, std::move(ts), Formula::truth()}; }
  static FunctionTranslation by_graph(Formula g) { return {Kind::Graph, {}, std::move(g)}; }
  bool is_terms() const noexcept { return kind == Kind::Terms; }

  friend bool operator==(const FunctionTranslation& a, const FunctionTranslation& b) {
    return a.kind == b.kind && a.terms == b.terms && a.graph == b.graph;
  }
};

struct Translation {
  Signature source;
  Signature target;
  std::size_t dimension = 1;
  std::optional<Formula> domain;
  std::optional<Formula> equality;
  std::map<std::string, Formula> relations;
  std::map<std::string, FunctionTranslation> functions;

  friend bool operator==(const Translation&, const Translation&) = default;
};

inline std::string param(std::size_t i) { return "x" + std::to_string(i); }

inline std::vector<Term> params(std::size_t from, std::size_t count) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(Term::var(param(from + i)));
  return out;
}

/// Replaces the parameters x0..x(k-1) of a member formula by `actuals`.
inline Formula instantiate(const Formula& f, const std::vector<Term>& actuals) {
  Binding b;
  for (std::size_t i = 0; i < actuals.size(); ++i) b.emplace(param(i), actuals[i]);
  return substitute(f, b);
}

inline Term instantiate(const Term& t, const std::vector<Term>& actuals) {
  Binding b;
  for (std::size_t i = 0; i < actuals.size(); ++i) b.emplace(param(i), actuals[i]);
  return substitute(t, b);
}

/// Each symbol translated to itself.
inline Translation identity_translation(const Signature& sig) {
  Translation t;
  t.source = sig;
  t.target = sig;
  for (const auto& [name, info] : sig.symbols()) {
    if (info.kind == SymbolKind::Relation)
      t.relations.emplace(name, Formula::atom(name, params(0, info.arity)));
    else
      t.functions.emplace(name, FunctionTranslation::by_terms({Term::app(name, params(0, info.arity))}));
  }
  return t;
}

namespace detail {

inline void require_params(const Formula& f, std::size_t count, const std::string& what) {
  for (const auto& v : free_variables(f)) {
    bool ok = false;
    for (std::size_t i = 0; i < count && !ok; ++i) ok = v == param(i);
    if (!ok) throw InputError(what + " has free variable '" + v + "' outside x0..x" + std::to_string(count - 1));
  }
}

inline void require_params(const Term& t, std::size_t count, const std::string& what) {
  for (const auto& v : variables(t)) {
    bool ok = false;
    for (std::size_t i = 0; i < count && !ok; ++i) ok = v == param(i);
    if (!ok) throw InputError(what + " has variable '" + v + "' outside the parameter range");
  }
}

}  // namespace detail

/// Checks coverage of the source signature and the parameter arithmetic.
inline void validate(const Translation& t) {
  if (t.dimension == 0) throw InputError("translation dimension must be at least 1");
  const std::size_t n = t.dimension;
  if (t.domain) {
    check_formula(*t.domain, t.target);
    detail::require_params(*t.domain, n, "domain formula");
  }
  if (t.equality) {
    check_formula(*t.equality, t.target);
    detail::require_params(*t.equality, 2 * n, "equality formula");
  }
  for (const auto& [name, info] : t.source.symbols()) {
    if (info.kind == SymbolKind::Relation) {
      auto it = t.relations.find(name);
      if (it == t.relations.end()) throw InputError("translation does not cover relation '" + name + "'");
      check_formula(it->second, t.target);
      detail::require_params(it->second, info.arity * n, "translation of '" + name + "'");
      continue;
    }
    auto it = t.functions.find(name);
    if (it == t.functions.end()) throw InputError("translation does not cover function '" + name + "'");
    const auto& ft = it->second;
    if (ft.is_terms()) {
      if (ft.terms.size() != n)
        throw InputError("function '" + name + "' needs " + std::to_string(n) + " defining terms");
      for (const auto& term : ft.terms) {
        check_term(term, t.target);
        detail::require_params(term, info.arity * n, "translation of '" + name + "'");
      }
    } else {
      check_formula(ft.graph, t.target);
      detail::require_params(ft.graph, (info.arity + 1) * n, "graph of '" + name + "'");
    }
  }
  for (const auto& [name, f] : t.relations)
    if (!t.source.is_relation(name)) throw InputError("translation of undeclared relation '" + name + "'");
  for (const auto& [name, f] : t.functions)
    if (!t.source.is_function(name)) throw InputError("translation of undeclared function '" + name + "'");
}

inline bool is_quantifier_free(const Translation& t) {
  if (t.domain && !is_quantifier_free(*t.domain)) return false;
  if (t.equality && !is_quantifier_free(*t.equality)) return false;
  for (const auto& [name, f] : t.relations)
    if (!is_quantifier_free(f)) return false;
  for (const auto& [name, ft] : t.functions)
    if (!ft.is_terms()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Translating formulas

namespace detail {

class Translator {
 public:
  using Blocks = std::map<std::string, std::vector<Term>>;

  // `fixed` pins the blocks of some free variables; other free variables
  // expand to v_0..v_(n-1) (or stay v when n = 1).
  Translator(const Translation& t, Blocks fixed = {}) : t_(t), n_(t.dimension), fixed_(std::move(fixed)) {
    for (const auto& [v, block] : fixed_)
      for (const auto& term : block)
        for (const auto& name : variables(term)) taken_.insert(name);
  }

  Formula formula(const Formula& f) {
    std::set<std::string> all = all_variables(f);
    for (const auto& v : all)
      for (const auto& name : default_block(v)) taken_.insert(name);
    Blocks scope = fixed_;
    for (const auto& v : free_variables(f))
      if (!scope.count(v)) scope.emplace(v, as_terms(default_block(v)));
    return walk(f, scope);
  }

  // Defining terms of a term built from term-defined functions only.
  std::vector<Term> term_tuple(const Term& t, const Blocks& scope) const {
    if (t.is_var()) {
      auto it = scope.find(t.name());
      return it != scope.end() ? it->second : as_terms(default_block(t.name()));
    }
    const auto& ft = function(t.name());
    if (!ft.is_terms()) throw InputError("function '" + t.name() + "' is graph-defined");
    std::vector<Term> actuals;
    for (const auto& a : t.args()) {
      auto block = term_tuple(a, scope);
      actuals.insert(actuals.end(), block.begin(), block.end());
    }
    std::vector<Term> out;
    for (const auto& d : ft.terms) out.push_back(instantiate(d, actuals));
    return out;
  }

 private:
  const FunctionTranslation& function(const std::string& name) const {
    auto it = t_.functions.find(name);
    if (it == t_.functions.end()) throw SignatureError("translation does not cover function '" + name + "'");
    return it->second;
  }

  std::vector<std::string> default_block(const std::string& v) const {
    if (n_ == 1) return {v};
    std::vector<std::string> out;
    for (std::size_t j = 0; j < n_; ++j) out.push_back(v + "_" + std::to_string(j));
    return out;
  }

  static std::vector<Term> as_terms(const std::vector<std::string>& names) {
    std::vector<Term> out;
    for (const auto& s : names) out.push_back(Term::var(s));
    return out;
  }

  std::vector<std::string> fresh_block(const std::string& base) {
    std::vector<std::string> out;
    for (const auto& name : default_block(base)) {
      std::string v = fresh_variable(name, taken_);
      taken_.insert(v);
      out.push_back(v);
    }
    return out;
  }

  Formula relativize_domain(const std::vector<Term>& block) const {
    return t_.domain ? instantiate(*t_.domain, block) : Formula::truth();
  }

  Formula equal_blocks(const std::vector<Term>& a, const std::vector<Term>& b) const {
    if (t_.equality) {
      std::vector<Term> actuals = a;
      actuals.insert(actuals.end(), b.begin(), b.end());
      return instantiate(*t_.equality, actuals);
    }
    std::vector<Formula> parts;
    for (std::size_t j = 0; j < a.size(); ++j) parts.push_back(Formula::equal(a[j], b[j]));
    return Formula::all_of(std::move(parts));
  }

  Formula quantifier(const Formula& f, Blocks& scope) {
    const bool exists = f.kind() == FormulaKind::Exists;
    // Keep the natural names unless they collide with another variable's block.
    std::set<std::string> others;
    for (const auto& [v, block] : scope)
      if (v != f.var())
        for (const auto& term : block)
          for (const auto& name : variables(term)) others.insert(name);
    std::vector<std::string> names = default_block(f.var());
    bool clash = std::any_of(names.begin(), names.end(), [&](const std::string& s) { return others.count(s) != 0; });
    if (clash) {
      std::set<std::string> avoid = taken_;
      avoid.insert(others.begin(), others.end());
      for (auto& s : names) {
        s = fresh_variable(s, avoid);
        avoid.insert(s);
        taken_.insert(s);
      }
    }
    auto saved = scope.find(f.var()) != scope.end() ? std::optional<std::vector<Term>>(scope[f.var()]) : std::nullopt;
    scope[f.var()] = as_terms(names);
    Formula body = walk(f.body(), scope);
    if (saved)
      scope[f.var()] = *saved;
    else
      scope.erase(f.var());
    Formula guard = relativize_domain(as_terms(names));
    if (guard.kind() == FormulaKind::True) return exists ? Formula::exists(names, body) : Formula::forall(names, body);
    return exists ? Formula::exists(names, Formula::conjunction({guard, body}))
                  : Formula::forall(names, Formula::implies(guard, body));
  }

  struct Flattening {
    std::vector<std::string> witnesses;
    std::vector<Formula> conditions;
    std::map<Term, std::vector<Term>> memo;
  };

  std::vector<Term> flatten(const Term& t, const Blocks& scope, Flattening& fl) {
    if (t.is_var()) {
      auto it = scope.find(t.name());
      return it != scope.end() ? it->second : as_terms(default_block(t.name()));
    }
    if (auto it = fl.memo.find(t); it != fl.memo.end()) return it->second;
    std::vector<Term> actuals;
    for (const auto& a : t.args()) {
      auto block = flatten(a, scope, fl);
      actuals.insert(actuals.end(), block.begin(), block.end());
    }
    const auto& ft = function(t.name());
    std::vector<Term> out;
    if (ft.is_terms()) {
      for (const auto& d : ft.terms) out.push_back(instantiate(d, actuals));
    } else {
      auto names = fresh_block("w");
      out = as_terms(names);
      fl.witnesses.insert(fl.witnesses.end(), names.begin(), names.end());
      Formula guard = relativize_domain(out);
      if (guard.kind() != FormulaKind::True) fl.conditions.push_back(guard);
      actuals.insert(actuals.end(), out.begin(), out.end());
      fl.conditions.push_back(instantiate(ft.graph, actuals));
    }
    fl.memo.emplace(t, out);
    return out;
  }

  // F(s) = v with F graph-defined and absolute equality: the graph itself.
  std::optional<Formula> direct_graph(const Term& app, const Term& var, const Blocks& scope, Flattening& fl) {
    if (t_.equality || !app.is_app() || !var.is_var()) return std::nullopt;
    const auto& ft = function(app.name());
    if (ft.is_terms()) return std::nullopt;
    std::vector<Term> actuals;
    for (const auto& a : app.args()) {
      auto block = flatten(a, scope, fl);
      actuals.insert(actuals.end(), block.begin(), block.end());
    }
    auto value = flatten(var, scope, fl);
    actuals.insert(actuals.end(), value.begin(), value.end());
    return instantiate(ft.graph, actuals);
  }

  Formula atom(const Formula& f, const Blocks& scope) {
    Flattening fl;
    Formula body = Formula::truth();
    if (f.kind() == FormulaKind::Equal) {
      const Term &l = f.terms()[0], &r = f.terms()[1];
      if (auto g = direct_graph(l, r, scope, fl))
        body = *g;
      else if (auto h = direct_graph(r, l, scope, fl))
        body = *h;
      else {
        auto a = flatten(l, scope, fl);
        auto b = flatten(r, scope, fl);
        body = equal_blocks(a, b);
      }
    } else {
      auto it = t_.relations.find(f.name());
      if (it == t_.relations.end()) throw SignatureError("translation does not cover relation '" + f.name() + "'");
      std::vector<Term> actuals;
      for (const auto& term : f.terms()) {
        auto block = flatten(term, scope, fl);
        actuals.insert(actuals.end(), block.begin(), block.end());
      }
      body = instantiate(it->second, actuals);
    }
    if (fl.witnesses.empty()) return body;
    std::vector<Formula> parts = fl.conditions;
    parts.push_back(body);
    return Formula::exists(fl.witnesses, Formula::all_of(std::move(parts)));
  }

  Formula walk(const Formula& f, Blocks& scope) {
    switch (f.kind()) {
      case FormulaKind::True:
      case FormulaKind::False:
        return f;
      case FormulaKind::Equal:
      case FormulaKind::Atom:
        return atom(f, scope);
      case FormulaKind::Not:
        return Formula::negation(walk(f.child(), scope));
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(walk(c, scope));
        return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
      }
      case FormulaKind::Implies:
        return Formula::implies(walk(f.child(0), scope), walk(f.child(1), scope));
      case FormulaKind::Iff:
        return Formula::iff(walk(f.child(0), scope), walk(f.child(1), scope));
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        return quantifier(f, scope);
    }
    return f;
  }

  const Translation& t_;
  std::size_t n_;
  Blocks fixed_;
  std::set<std::string> taken_;
};

}  // namespace detail

/// The I-translation of a source formula. A free variable v becomes the block
/// v_0..v_(n-1) (v itself when n = 1); the result is meant under the
/// assumption that each such block satisfies the domain formula.
inline Formula translate(const Translation& t, const Formula& f) {
  check_formula(f, t.source);
  return detail::Translator(t).formula(f);
}

/// Defining terms of a source term under a translation whose functions are
/// all term-defined.
inline std::vector<Term> translate_term(const Translation& t, const Term& term) {
  check_term(term, t.source);
  return detail::Translator(t).term_tuple(term, {});
}

// ---------------------------------------------------------------------------
// Composition

/// `outer` after `inner`: a translation of inner.source into outer.target,
/// where inner.target must equal outer.source. Dimension multiplies.
inline Translation compose(const Translation& outer, const Translation& inner) {
  if (!(inner.target == outer.source))
    throw SignatureError("cannot compose: target of the inner translation is not the source of the outer one");
  const std::size_t n1 = outer.dimension, n2 = inner.dimension;
  Translation r;
  r.source = inner.source;
  r.target = outer.target;
  r.dimension = n1 * n2;

  // Parameter x_i of an inner member formula becomes the outer block x_(i*n1)..x_(i*n1+n1-1).
  auto through = [&](const Formula& f, std::size_t count) {
    detail::Translator::Blocks blocks;
    for (std::size_t i = 0; i < count; ++i) blocks.emplace(param(i), params(i * n1, n1));
    return detail::Translator(outer, blocks).formula(f);
  };
  auto term_through = [&](const Term& term, std::size_t count) {
    detail::Translator::Blocks blocks;
    for (std::size_t i = 0; i < count; ++i) blocks.emplace(param(i), params(i * n1, n1));
    return detail::Translator(outer, blocks).term_tuple(term, blocks);
  };

  std::vector<Formula> dom;
  if (outer.domain)
    for (std::size_t i = 0; i < n2; ++i) dom.push_back(instantiate(*outer.domain, params(i * n1, n1)));
  if (inner.domain) dom.push_back(through(*inner.domain, n2));
  if (!dom.empty()) r.domain = Formula::all_of(std::move(dom));

  if (outer.equality || inner.equality) {
    Formula eq2 = inner.equality ? *inner.equality : Formula::truth();
    if (!inner.equality) {
      std::vector<Formula> parts;
      for (std::size_t j = 0; j < n2; ++j) parts.push_back(Formula::equal(Term::var(param(j)), Term::var(param(n2 + j))));
      eq2 = Formula::all_of(std::move(parts));
    }
    r.equality = through(eq2, 2 * n2);
  }

  for (const auto& [name, f] : inner.relations) r.relations.emplace(name, through(f, inner.source.lookup(name)->arity * n2));

  for (const auto& [name, ft] : inner.functions) {
    const std::size_t k = inner.source.lookup(name)->arity;
    if (ft.is_terms()) {
      bool all_terms = true;
      std::vector<Term> composed;
      try {
        for (const auto& d : ft.terms) {
          auto block = term_through(d, k * n2);
          composed.insert(composed.end(), block.begin(), block.end());
        }
      } catch (const InputError&) {
        all_terms = false;
      }
      if (all_terms) {
        r.functions.emplace(name, FunctionTranslation::by_terms(std::move(composed)));
        continue;
      }
      std::vector<Formula> parts;
      for (std::size_t j = 0; j < n2; ++j) parts.push_back(Formula::equal(Term::var(param(k * n2 + j)), ft.terms[j]));
      r.functions.emplace(name, FunctionTranslation::by_graph(through(Formula::all_of(std::move(parts)), (k + 1) * n2)));
    } else {
      r.functions.emplace(name, FunctionTranslation::by_graph(through(ft.graph, (k + 1) * n2)));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Obligations

struct Obligation {
  std::string label;
  Formula sentence = Formula::truth();
  std::optional<DecisionResult> result;  // absent when undischarged
  std::string note;

  bool discharged() const { return result && result->verdict == Verdict::Valid; }
};

struct ObligationReport {
  std::vector<Obligation> items;

  std::size_t discharged() const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [](const Obligation& o) { return o.discharged(); }));
  }
};

namespace detail {

inline std::vector<std::string> named(const std::string& base, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(base + std::to_string(i));
  return out;
}

inline std::vector<Term> var_terms(const std::vector<std::string>& names) {
  std::vector<Term> out;
  for (const auto& s : names) out.push_back(Term::var(s));
  return out;
}

// Equality axioms of the source language, in the source language.
inline std::vector<std::pair<std::string, Formula>> equality_axioms(const Signature& sig) {
  Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
  std::vector<std::pair<std::string, Formula>> out;
  out.emplace_back("eq-reflexivity", Formula::forall("x", Formula::equal(x, x)));
  out.emplace_back("eq-symmetry",
                   Formula::forall(std::vector<std::string>{"x", "y"}, Formula::implies(Formula::equal(x, y), Formula::equal(y, x))));
  out.emplace_back("eq-transitivity",
                   Formula::forall(std::vector<std::string>{"x", "y", "z"},
                                   Formula::implies(Formula::conjunction({Formula::equal(x, y), Formula::equal(y, z)}),
                                                    Formula::equal(x, z))));
  for (const auto& [name, info] : sig.symbols()) {
    auto xs = named("x", info.arity), ys = named("y", info.arity);
    std::vector<Formula> same;
    for (std::size_t i = 0; i < info.arity; ++i) same.push_back(Formula::equal(Term::var(xs[i]), Term::var(ys[i])));
    std::vector<std::string> vars = xs;
    vars.insert(vars.end(), ys.begin(), ys.end());
    if (info.kind == SymbolKind::Relation) {
      same.push_back(Formula::atom(name, var_terms(xs)));
      out.emplace_back("eq-congruence:" + name,
                       Formula::forall(vars, Formula::implies(Formula::all_of(std::move(same)),
                                                              Formula::atom(name, var_terms(ys)))));
    } else {
      Term u = Term::var("u"), v = Term::var("v");
      same.push_back(Formula::equal(Term::app(name, var_terms(xs)), u));
      same.push_back(Formula::equal(Term::app(name, var_terms(ys)), v));
      vars.push_back("u");
      vars.push_back("v");
      out.emplace_back("eq-congruence:" + name,
                       Formula::forall(vars, Formula::implies(Formula::all_of(std::move(same)), Formula::equal(u, v))));
    }
  }
  return out;
}

}  // namespace detail

/// Tries to show a target sentence valid in EC of the target language (plus
/// `hypotheses`). Never throws on resource limits: the obligation is then
/// left undischarged with a note.
inline void discharge(Obligation& o, const Signature& target, const std::vector<Formula>& hypotheses,
                      const Limits& limits) {
  try {
    if (is_universal(o.sentence)) {
      auto [vars, matrix] = split_universal_prefix(o.sentence);
      if (ground_valid(matrix, limits)) {
        DecisionResult r;
        r.verdict = Verdict::Valid;
        r.equivalent = Formula::truth();
        o.result = r;
        return;
      }
    }
    Formula goal = hypotheses.empty() ? o.sentence : Formula::implies(Formula::all_of(hypotheses), o.sentence);
    o.result = decide(goal, target, limits);
  } catch (const ResourceLimit& e) {
    o.result.reset();
    o.note = e.what();
  }
}

/// Totality of graph-defined functions (and closure of the domain under
/// term-defined ones when a domain formula is present), the equality axioms,
/// then each translated axiom. With `discharge_all`, each is decided.
inline ObligationReport obligations(const Translation& t, const std::vector<Formula>& axioms,
                                    bool discharge_all = true, const std::vector<Formula>& hypotheses = {},
                                    const Limits& limits = {}) {
  validate(t);
  ObligationReport report;
  for (const auto& [name, ft] : t.functions) {
    if (ft.is_terms() && !t.domain) continue;
    const std::size_t k = t.source.lookup(name)->arity;
    auto xs = detail::named("x", k);
    Formula total = Formula::forall(
        xs, Formula::exists("y", Formula::equal(Term::app(name, detail::var_terms(xs)), Term::var("y"))));
    report.items.push_back({"totality:" + name, translate(t, total), std::nullopt, ""});
  }
  for (const auto& [label, f] : detail::equality_axioms(t.source))
    report.items.push_back({label, translate(t, f), std::nullopt, ""});
  for (std::size_t i = 0; i < axioms.size(); ++i) {
    if (!is_sentence(axioms[i])) throw InputError("axiom " + std::to_string(i) + " is not a sentence");
    report.items.push_back({"axiom:" + std::to_string(i), translate(t, axioms[i]), std::nullopt, ""});
  }
  if (discharge_all)
    for (auto& o : report.items) discharge(o, t.target, hypotheses, limits);
  return report;
}

// ---------------------------------------------------------------------------
// Constructions

namespace detail {

inline Term tuple_term(const std::string& pair, const std::vector<Term>& items) {
  if (items.empty()) throw InputError("empty tuple");
  Term acc = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) acc = Term::app(pair, {items[i], acc});
  return acc;
}

inline std::string fresh_symbol(const std::string& base, const Signature& sig, const std::set<std::string>& extra = {}) {
  if (!sig.contains(base) && !extra.count(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string s = base + "_" + std::to_string(i);
    if (!sig.contains(s) && !extra.count(s)) return s;
  }
}

}  // namespace detail

struct BinaryReduction {
  Translation translation;
  Signature target;
  std::string pair_symbol;
  std::vector<Formula> distinctness;  // c_F != c_G for distinct tagged symbols
};

/// Translation of `sig` into one binary function plus constants. Each n-ary
/// function F (n > 0) gets a tag constant c_F and
///   F(x0..x(n-1)) := ((c_F, x0..x(n-1)), x0..x(n-1), x0..x(n-1))
/// with right-nested tuples. With `relations`, a relation R is first turned
/// into a function F_R with R(x) := F_R(x) = c, where c is the first constant
/// of `sig` (or a new one).
inline BinaryReduction binary_reduction(const Signature& sig, bool relations = false) {
  if (!relations && !sig.relations().empty())
    throw SignatureError("signature has relations; enable relation handling to reduce it");
  BinaryReduction b;
  std::set<std::string> reserved;
  b.pair_symbol = detail::fresh_symbol("pair", sig);
  reserved.insert(b.pair_symbol);
  b.target.add_function(b.pair_symbol, 2);
  for (const auto& c : sig.constants()) b.target.add_constant(c);

  std::optional<std::string> truth_constant;
  if (relations && !sig.relations().empty()) {
    auto cs = sig.constants();
    truth_constant = cs.empty() ? detail::fresh_symbol("rel_true", sig, reserved) : cs.front();
    reserved.insert(*truth_constant);
    b.target.add_constant(*truth_constant);
  }

  Translation& t = b.translation;
  t.source = sig;
  t.dimension = 1;
  std::vector<std::string> tags;
  auto tag_for = [&](const std::string& symbol) {
    std::string tag = detail::fresh_symbol("pair_tag_" + symbol, sig, reserved);
    reserved.insert(tag);
    b.target.add_constant(tag);
    tags.push_back(tag);
    return tag;
  };
  auto encode = [&](const std::string& tag, std::size_t n) {
    if (n == 0) return Term::constant(tag);
    auto xs = params(0, n);
    std::vector<Term> head{Term::constant(tag)};
    head.insert(head.end(), xs.begin(), xs.end());
    std::vector<Term> all{detail::tuple_term(b.pair_symbol, head)};
    all.insert(all.end(), xs.begin(), xs.end());
    all.insert(all.end(), xs.begin(), xs.end());
    return detail::tuple_term(b.pair_symbol, all);
  };

  for (const auto& [name, info] : sig.symbols()) {
    if (info.kind == SymbolKind::Function) {
      if (info.arity == 0)
        t.functions.emplace(name, FunctionTranslation::by_terms({Term::constant(name)}));
      else
        t.functions.emplace(name, FunctionTranslation::by_terms({encode(tag_for(name), info.arity)}));
    } else {
      std::string tag = tag_for(name);
      t.relations.emplace(name, Formula::equal(encode(tag, info.arity), Term::constant(*truth_constant)));
    }
  }
  t.target = b.target;
  for (std::size_t i = 0; i < tags.size(); ++i)
    for (std::size_t j = i + 1; j < tags.size(); ++j)
      b.distinctness.push_back(Formula::not_equal(Term::constant(tags[i]), Term::constant(tags[j])));
  return b;
}

struct PairingTerms {
  Term left;   // over the variable x
  Term right;  // over the variable x
  Formula theorem = Formula::truth();
};

/// Terms L(x), R(x) such that EC proves that every pair of elements is
/// (L(z), R(z)) for some z.
inline PairingTerms pairing_terms(const Signature& sig) {
  Term x = Term::var("x");
  std::vector<std::string> unary, wide;
  for (const auto& [name, info] : sig.symbols()) {
    if (info.kind != SymbolKind::Function) continue;
    if (info.arity == 1) unary.push_back(name);
    if (info.arity >= 2) wide.push_back(name);
  }
  PairingTerms p{x, x, Formula::truth()};
  if (unary.size() >= 2) {
    p.left = Term::app(unary[0], {x});
    p.right = Term::app(unary[1], {x});
  } else if (!wide.empty()) {
    const std::string& h = wide.front();
    const std::size_t k = sig.lookup(h)->arity;
    Term diag = Term::app(h, std::vector<Term>(k, x));
    std::vector<Term> l(k, x), r(k, x);
    l.front() = diag;
    r.back() = diag;
    p.left = Term::app(h, l);
    p.right = Term::app(h, r);
  } else {
    throw SignatureError("signature has neither two unary functions nor a function of arity at least 2");
  }
  Binding at_z{{"x", Term::var("z")}};
  p.theorem = Formula::forall(
      std::vector<std::string>{"x", "y"}, Formula::exists("z", Formula::conjunction({Formula::equal(substitute(p.left, at_z), Term::var("x")),
                                                              Formula::equal(substitute(p.right, at_z), Term::var("y"))})));
  return p;
}

// ---------------------------------------------------------------------------
// Induced structures

/// The source structure defined inside `n` by an unrelativized translation
/// with absolute equality and term-defined functions. Element e of the
/// result is the tuple tuple_of(e) over `n`.
struct InducedStructure {
  FiniteStructure structure;
  std::size_t dimension = 1;
  std::size_t base = 0;

  std::vector<Element> tuple_of(Element e) const {
    std::vector<Element> out(dimension);
    for (std::size_t j = dimension; j-- > 0;) {
      out[j] = e % base;
      e /= base;
    }
    return out;
  }
  Element element_of(const std::vector<Element>& tuple) const {
    Element e = 0;
    for (Element a : tuple) e = e * base + a;
    return e;
  }
};

inline InducedStructure induced_structure(const Translation& t, const FiniteStructure& n) {
  validate(t);
  if (t.domain || t.equality) throw InputError("induced_structure needs an unrelativized translation with absolute equality");
  for (const auto& [name, ft] : t.functions)
    if (!ft.is_terms()) throw InputError("induced_structure needs term-defined functions");
  InducedStructure r;
  r.dimension = t.dimension;
  r.base = n.size();
  std::size_t size = 1;
  for (std::size_t j = 0; j < t.dimension; ++j) size *= n.size();
  r.structure = FiniteStructure(t.source, size);
  for (const auto& [name, info] : t.source.symbols()) {
    const std::size_t cells = r.structure.table_size(info.arity);
    for (std::size_t idx = 0; idx < cells; ++idx) {
      auto args = r.structure.tuple_at(idx, info.arity);
      Environment env;
      for (std::size_t i = 0; i < args.size(); ++i) {
        auto tuple = r.tuple_of(args[i]);
        for (std::size_t j = 0; j < t.dimension; ++j) env[param(i * t.dimension + j)] = tuple[j];
      }
      if (info.kind == SymbolKind::Relation) {
        r.structure.set_relation(name, args, eval_formula(n, t.relations.at(name), env));
      } else {
        std::vector<Element> value;
        for (const auto& d : t.functions.at(name).terms) value.push_back(eval_term(n, d, env));
        r.structure.set_function(name, args, r.element_of(value));
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Translation files:
//   (translation (dim N) (source DECL...) (target DECL...) (domain F) (eq F)
//                (rel NAME F) (fun NAME (term T...)) (fun NAME (graph F)))

inline Translation parse_translation(std::string_view text, const std::optional<Signature>& default_source = {}) {
  SExpr root = read_sexpr(text);
  if (root.head() != "translation") root.fail("expected (translation ...)");
  Translation t;
  bool have_source = false, have_target = false, have_dim = false;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& c = root.items[i];
    auto head = c.head();
    if (head == "source" || head == "target") {
      Signature& s = head == "source" ? t.source : t.target;
      for (std::size_t k = 1; k < c.items.size(); ++k) add_declaration(s, c.items[k]);
      (head == "source" ? have_source : have_target) = true;
    } else if (head == "dim") {
      if (c.items.size() != 2) c.fail("expected (dim N)");
      t.dimension = parse_natural(c.items[1]);
      if (t.dimension == 0) c.fail("dimension must be at least 1");
      have_dim = true;
    }
  }
  if (!have_target) root.fail("missing (target ...) clause");
  if (!have_source) {
    if (!default_source) root.fail("missing (source ...) clause and no signature given");
    t.source = *default_source;
  }
  (void)have_dim;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& c = root.items[i];
    auto head = c.head();
    if (head == "source" || head == "target" || head == "dim") continue;
    if (head == "domain" || head == "eq") {
      if (c.items.size() != 2) c.fail("expected (" + std::string(head) + " FORMULA)");
      Formula f = formula_from_sexpr(c.items[1], t.target);
      (head == "domain" ? t.domain : t.equality) = f;
    } else if (head == "rel") {
      if (c.items.size() != 3 || c.items[1].is_list) c.fail("expected (rel NAME FORMULA)");
      t.relations.insert_or_assign(c.items[1].atom, formula_from_sexpr(c.items[2], t.target));
    } else if (head == "fun") {
      if (c.items.size() != 3 || c.items[1].is_list) c.fail("expected (fun NAME (term ...)) or (fun NAME (graph ...))");
      const SExpr& def = c.items[2];
      if (def.head() == "term") {
        std::vector<Term> ts;
        for (std::size_t k = 1; k < def.items.size(); ++k) ts.push_back(term_from_sexpr(def.items[k], t.target));
        t.functions[c.items[1].atom] = FunctionTranslation::by_terms(std::move(ts));
      } else if (def.head() == "graph") {
        if (def.items.size() != 2) def.fail("expected (graph FORMULA)");
        t.functions[c.items[1].atom] = FunctionTranslation::by_graph(formula_from_sexpr(def.items[1], t.target));
      } else {
        def.fail("expected (term ...) or (graph ...)");
      }
    } else {
      c.fail("unknown translation clause");
    }
  }
  validate(t);
  return t;
}

inline std::string print_translation(const Translation& t) {
  std::ostringstream os;
  auto decls = [&](const char* head, const Signature& s) {
    os << "  (" << head;
    for (const auto& [name, info] : s.symbols()) {
      if (info.kind == SymbolKind::Function && info.arity == 0)
        os << " (const " << name << ')';
      else
        os << " (" << (info.kind == SymbolKind::Function ? "fun " : "rel ") << name << ' ' << info.arity << ')';
    }
    os << ")\n";
  };
  os << "(translation\n  (dim " << t.dimension << ")\n";
  decls("source", t.source);
  decls("target", t.target);
  if (t.domain) os << "  (domain " << *t.domain << ")\n";
  if (t.equality) os << "  (eq " << *t.equality << ")\n";
  for (const auto& [name, f] : t.relations) os << "  (rel " << name << ' ' << f << ")\n";
  for (const auto& [name, ft] : t.functions) {
    os << "  (fun " << name << ' ';
    if (ft.is_terms()) {
      os << "(term";
      for (const auto& d : ft.terms) os << ' ' << d;
      os << ')';
    } else {
      os << "(graph " << ft.graph << ')';
    }
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

}  // namespace ecl
