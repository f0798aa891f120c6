// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecl/errors.hpp"

namespace ecl {

enum class SymbolKind { Relation, Function };

struct SymbolInfo {
  SymbolKind kind;
  std::size_t arity;

  friend bool operator==(const SymbolInfo&, const SymbolInfo&) = default;
};

/// A finite first-order language. Names are unique across relation and
/// function symbols; arity 0 is allowed for both (constants and
/// propositional symbols).
class Signature {
 public:
  Signature() = default;

  Signature& add_function(const std::string& name, std::size_t arity) { return add(name, {SymbolKind::Function, arity}); }
  Signature& add_constant(const std::string& name) { return add(name, {SymbolKind::Function, 0}); }
  Signature& add_relation(const std::string& name, std::size_t arity) { return add(name, {SymbolKind::Relation, arity}); }

  Signature& add(const std::string& name, SymbolInfo info) {
    auto [it, inserted] = symbols_.emplace(name, info);
    if (!inserted && !(it->second == info)) {
      throw SignatureError("symbol '" + name + "' declared twice with different kinds or arities");
    }
    return *this;
  }

  bool contains(const std::string& name) const { return symbols_.count(name) != 0; }

  std::optional<SymbolInfo> lookup(const std::string& name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) return std::nullopt;
    return it->second;
  }

  bool is_function(const std::string& name) const {
    auto info = lookup(name);
    return info && info->kind == SymbolKind::Function;
  }
  bool is_relation(const std::string& name) const {
    auto info = lookup(name);
    return info && info->kind == SymbolKind::Relation;
  }
  bool is_constant(const std::string& name) const {
    auto info = lookup(name);
    return info && info->kind == SymbolKind::Function && info->arity == 0;
  }

  const std::map<std::string, SymbolInfo>& symbols() const noexcept { return symbols_; }
  bool empty() const noexcept { return symbols_.empty(); }

  std::vector<std::string> names_of(SymbolKind kind) const {
    std::vector<std::string> out;
    for (const auto& [name, info] : symbols_)
      if (info.kind == kind) out.push_back(name);
    return out;
  }
  std::vector<std::string> functions() const { return names_of(SymbolKind::Function); }
  std::vector<std::string> relations() const { return names_of(SymbolKind::Relation); }
  std::vector<std::string> constants() const {
    std::vector<std::string> out;
    for (const auto& [name, info] : symbols_)
      if (info.kind == SymbolKind::Function && info.arity == 0) out.push_back(name);
    return out;
  }
  bool has_constants() const { return !constants().empty(); }

  /// Union of two signatures; clashing declarations are an error.
  Signature merged(const Signature& other) const {
    Signature out = *this;
    for (const auto& [name, info] : other.symbols_) out.add(name, info);
    return out;
  }

  Signature restricted_to(const std::set<std::string>& names) const {
    Signature out;
    for (const auto& [name, info] : symbols_)
      if (names.count(name)) out.symbols_.emplace(name, info);
    return out;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, SymbolInfo> symbols_;
};

/// Immutable first-order term: a variable or a function application.
/// Copies share structure.
class Term {
 public:
  static Term var(std::string name) {
    Term t;
    t.node_ = std::make_shared<const Node>(Node{true, std::move(name), {}, 0});
    return t;
  }

  static Term app(std::string symbol, std::vector<Term> args = {}) {
    std::size_t height = 0;
    for (const auto& a : args) height = std::max(height, a.height() + 1);
    Term t;
    t.node_ = std::make_shared<const Node>(Node{false, std::move(symbol), std::move(args), height});
    return t;
  }

  static Term constant(std::string symbol) { return app(std::move(symbol)); }

  bool is_var() const noexcept { return node_->is_var; }
  bool is_app() const noexcept { return !node_->is_var; }
  bool is_constant() const noexcept { return !node_->is_var && node_->args.empty(); }
  const std::string& name() const noexcept { return node_->name; }
  const std::vector<Term>& args() const noexcept { return node_->args; }
  std::size_t arity() const noexcept { return node_->args.size(); }
  // Variables and constants have height 0.
  std::size_t height() const noexcept { return node_->height; }

  // Total order by (height, symbol name, variables before applications, arguments).
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.height() <=> b.height(); c != 0) return c;
    if (auto c = a.name() <=> b.name(); c != 0) return c;
    if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::lexicographical_compare_three_way(a.args().begin(), a.args().end(), b.args().begin(),
                                                  b.args().end());
  }
  friend bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

 private:
  struct Node {
    bool is_var;
    std::string name;
    std::vector<Term> args;
    std::size_t height;
  };
  Term() = default;
  std::shared_ptr<const Node> node_;
};

enum class FormulaKind { True, False, Equal, Atom, Not, And, Or, Implies, Iff, Exists, Forall };

/// Immutable first-order formula with equality. `And`/`Or` are n-ary.
class Formula {
 public:
  static Formula truth() { return make(FormulaKind::True, {}, {}, {}); }
  static Formula falsity() { return make(FormulaKind::False, {}, {}, {}); }
  static Formula equal(Term a, Term b) { return make(FormulaKind::Equal, {}, {std::move(a), std::move(b)}, {}); }
  static Formula not_equal(Term a, Term b) { return negation(equal(std::move(a), std::move(b))); }
  static Formula atom(std::string relation, std::vector<Term> args = {}) {
    return make(FormulaKind::Atom, std::move(relation), std::move(args), {});
  }
  static Formula negation(Formula f) { return make(FormulaKind::Not, {}, {}, {std::move(f)}); }
  static Formula conjunction(std::vector<Formula> fs) { return make(FormulaKind::And, {}, {}, std::move(fs)); }
  static Formula disjunction(std::vector<Formula> fs) { return make(FormulaKind::Or, {}, {}, std::move(fs)); }
  static Formula implies(Formula a, Formula b) { return make(FormulaKind::Implies, {}, {}, {std::move(a), std::move(b)}); }
  static Formula iff(Formula a, Formula b) { return make(FormulaKind::Iff, {}, {}, {std::move(a), std::move(b)}); }
  static Formula exists(std::string var, Formula body) {
    return make(FormulaKind::Exists, std::move(var), {}, {std::move(body)});
  }
  static Formula forall(std::string var, Formula body) {
    return make(FormulaKind::Forall, std::move(var), {}, {std::move(body)});
  }
  static Formula exists(const std::vector<std::string>& vars, Formula body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
    return body;
  }
  static Formula forall(const std::vector<std::string>& vars, Formula body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, std::move(body));
    return body;
  }

  // Conjunction/disjunction builders that avoid one-element wrappers.
  static Formula all_of(std::vector<Formula> fs) {
    if (fs.empty()) return truth();
    if (fs.size() == 1) return std::move(fs.front());
    return conjunction(std::move(fs));
  }
  static Formula any_of(std::vector<Formula> fs) {
    if (fs.empty()) return falsity();
    if (fs.size() == 1) return std::move(fs.front());
    return disjunction(std::move(fs));
  }

  FormulaKind kind() const noexcept { return node_->kind; }
  // Relation symbol for atoms, bound variable for quantifiers.
  const std::string& name() const noexcept { return node_->name; }
  const std::string& var() const noexcept { return node_->name; }
  const std::vector<Term>& terms() const noexcept { return node_->terms; }
  const std::vector<Formula>& children() const noexcept { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }
  const Formula& body() const { return node_->children.at(0); }

  bool is_atomic() const noexcept {
    auto k = kind();
    return k == FormulaKind::Equal || k == FormulaKind::Atom;
  }
  bool is_literal() const noexcept { return is_atomic() || (kind() == FormulaKind::Not && child().is_atomic()); }
  bool is_quantifier() const noexcept { return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall; }

  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = static_cast<int>(a.kind()) <=> static_cast<int>(b.kind()); c != 0) return c;
    if (auto c = a.name() <=> b.name(); c != 0) return c;
    if (auto c = std::lexicographical_compare_three_way(a.terms().begin(), a.terms().end(), b.terms().begin(),
                                                        b.terms().end());
        c != 0)
      return c;
    return std::lexicographical_compare_three_way(a.children().begin(), a.children().end(),
                                                  b.children().begin(), b.children().end());
  }
  friend bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }

 private:
  struct Node {
    FormulaKind kind;
    std::string name;
    std::vector<Term> terms;
    std::vector<Formula> children;
  };
  static Formula make(FormulaKind kind, std::string name, std::vector<Term> terms, std::vector<Formula> children) {
    Formula f;
    f.node_ = std::make_shared<const Node>(Node{kind, std::move(name), std::move(terms), std::move(children)});
    return f;
  }
  Formula() = default;
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Term queries

inline void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}

inline std::set<std::string> variables(const Term& t) {
  std::set<std::string> out;
  collect_variables(t, out);
  return out;
}

inline bool occurs(const std::string& var, const Term& t) {
  if (t.is_var()) return t.name() == var;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return occurs(var, a); });
}

inline void collect_subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  for (const auto& a : t.args()) collect_subterms(a, out);
}

/// Least subterm-closed superset of `terms`, in term order, without duplicates.
template <typename Range>
std::vector<Term> subterm_closure(const Range& terms) {
  std::set<Term> out;
  for (const Term& t : terms) collect_subterms(t, out);
  return {out.begin(), out.end()};
}

inline std::vector<Term> subterm_closure(std::initializer_list<Term> terms) {
  return subterm_closure(std::vector<Term>(terms));
}

// ---------------------------------------------------------------------------
// Formula queries

namespace detail {
inline void free_variables(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Equal:
    case FormulaKind::Atom: {
      std::set<std::string> vs;
      for (const auto& t : f.terms()) collect_variables(t, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool fresh = bound.insert(f.var()).second;
      free_variables(f.body(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
    default:
      for (const auto& c : f.children()) free_variables(c, bound, out);
  }
}
}  // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  detail::free_variables(f, bound, out);
  return out;
}

/// Every variable name occurring in `f`, free or bound.
inline void collect_all_variables(const Formula& f, std::set<std::string>& out) {
  if (f.is_quantifier()) out.insert(f.var());
  for (const auto& t : f.terms()) collect_variables(t, out);
  for (const auto& c : f.children()) collect_all_variables(c, out);
}

inline std::set<std::string> all_variables(const Formula& f) {
  std::set<std::string> out;
  collect_all_variables(f, out);
  return out;
}

inline bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  return std::all_of(f.children().begin(), f.children().end(), is_quantifier_free);
}

inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

/// True for a block of universal quantifiers over a quantifier-free matrix.
inline bool is_universal(const Formula& f) {
  const Formula* g = &f;
  while (g->kind() == FormulaKind::Forall) g = &g->body();
  return is_quantifier_free(*g);
}

inline bool is_existential(const Formula& f) {
  const Formula* g = &f;
  while (g->kind() == FormulaKind::Exists) g = &g->body();
  return is_quantifier_free(*g);
}

/// Strips a leading block of universal quantifiers.
inline std::pair<std::vector<std::string>, Formula> split_universal_prefix(const Formula& f) {
  std::vector<std::string> vars;
  Formula g = f;
  while (g.kind() == FormulaKind::Forall) {
    vars.push_back(g.var());
    g = g.body();
  }
  return {vars, g};
}

inline void collect_terms(const Formula& f, std::vector<Term>& out) {
  for (const auto& t : f.terms()) out.push_back(t);
  for (const auto& c : f.children()) collect_terms(c, out);
}

/// Distinct subterms of all terms occurring in atoms of `f`, in term order.
inline std::vector<Term> subterms_of(const Formula& f) {
  std::vector<Term> ts;
  collect_terms(f, ts);
  return subterm_closure(ts);
}

inline void collect_symbols(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) return;
  out.insert(t.name());
  for (const auto& a : t.args()) collect_symbols(a, out);
}

inline void collect_symbols(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == FormulaKind::Atom) out.insert(f.name());
  for (const auto& t : f.terms()) collect_symbols(t, out);
  for (const auto& c : f.children()) collect_symbols(c, out);
}

/// Non-logical symbols occurring in `f`.
inline std::set<std::string> symbols_of(const Formula& f) {
  std::set<std::string> out;
  collect_symbols(f, out);
  return out;
}

/// Atomic subformulas (equalities and relation atoms) in formula order.
inline void collect_atoms(const Formula& f, std::set<Formula>& out) {
  if (f.is_atomic()) {
    out.insert(f);
    return;
  }
  for (const auto& c : f.children()) collect_atoms(c, out);
}

inline std::size_t size_of(const Formula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children()) n += size_of(c);
  return n;
}

// ---------------------------------------------------------------------------
// Well-formedness against a signature

inline void check_term(const Term& t, const Signature& sig) {
  if (t.is_var()) {
    if (sig.contains(t.name()))
      throw SignatureError("'" + t.name() + "' is a declared symbol and cannot be used as a variable");
    return;
  }
  auto info = sig.lookup(t.name());
  if (!info) throw SignatureError("unknown function symbol '" + t.name() + "'");
  if (info->kind != SymbolKind::Function) throw SignatureError("'" + t.name() + "' is a relation, not a function");
  if (info->arity != t.arity())
    throw SignatureError("arity mismatch for '" + t.name() + "': expected " + std::to_string(info->arity) + ", got " +
                         std::to_string(t.arity()));
  for (const auto& a : t.args()) check_term(a, sig);
}

inline void check_formula(const Formula& f, const Signature& sig) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      auto info = sig.lookup(f.name());
      if (!info) throw SignatureError("unknown relation symbol '" + f.name() + "'");
      if (info->kind != SymbolKind::Relation)
        throw SignatureError("'" + f.name() + "' is a function, not a relation");
      if (info->arity != f.terms().size())
        throw SignatureError("arity mismatch for '" + f.name() + "': expected " + std::to_string(info->arity) +
                             ", got " + std::to_string(f.terms().size()));
      break;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      if (sig.contains(f.var()))
        throw SignatureError("'" + f.var() + "' is a declared symbol and cannot be bound");
      break;
    default:
      break;
  }
  for (const auto& t : f.terms()) check_term(t, sig);
  for (const auto& c : f.children()) check_formula(c, sig);
}

// ---------------------------------------------------------------------------
// Fresh names and substitution

/// Returns `base` with a numeric suffix (`base_1`, `base_2`, ...) not in `used`.
/// An existing `_k` suffix on `base` is stripped first so names do not grow.
inline std::string fresh_variable(const std::string& base, const std::set<std::string>& used) {
  std::string root = base;
  auto pos = root.rfind('_');
  if (pos != std::string::npos && pos > 0 && pos + 1 < root.size() &&
      std::all_of(root.begin() + static_cast<std::ptrdiff_t>(pos) + 1, root.end(),
                  [](char c) { return c >= '0' && c <= '9'; }))
    root.resize(pos);
  if (root.empty()) root = "v";
  for (std::size_t k = 1;; ++k) {
    std::string candidate = root + "_" + std::to_string(k);
    if (!used.count(candidate)) return candidate;
  }
}

using Binding = std::map<std::string, Term>;

inline Term substitute(const Term& t, const Binding& binding) {
  if (t.is_var()) {
    auto it = binding.find(t.name());
    return it == binding.end() ? t : it->second;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(substitute(a, binding));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.name(), std::move(args)) : t;
}

/// Simultaneous capture-avoiding substitution. Bound variables are renamed
/// only when a substituted term would otherwise be captured.
inline Formula substitute(const Formula& f, const Binding& binding) {
  if (binding.empty()) return f;
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Equal:
      return Formula::equal(substitute(f.terms()[0], binding), substitute(f.terms()[1], binding));
    case FormulaKind::Atom: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(substitute(t, binding));
      return Formula::atom(f.name(), std::move(args));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      Binding inner = binding;
      inner.erase(f.var());
      auto body_free = free_variables(f.body());
      bool captures = false;
      std::set<std::string> incoming;
      for (const auto& [v, t] : inner) {
        if (!body_free.count(v)) continue;
        collect_variables(t, incoming);
      }
      for (auto it = inner.begin(); it != inner.end();) {
        if (!body_free.count(it->first))
          it = inner.erase(it);
        else
          ++it;
      }
      if (inner.empty()) return f;
      captures = incoming.count(f.var()) != 0;
      std::string var = f.var();
      if (captures) {
        std::set<std::string> used = all_variables(f.body());
        used.insert(incoming.begin(), incoming.end());
        for (const auto& [v, t] : inner) used.insert(v);
        var = fresh_variable(f.var(), used);
        inner.insert_or_assign(f.var(), Term::var(var));
      }
      Formula body = substitute(f.body(), inner);
      return f.kind() == FormulaKind::Exists ? Formula::exists(var, body) : Formula::forall(var, body);
    }
    case FormulaKind::Not:
      return Formula::negation(substitute(f.child(), binding));
    case FormulaKind::Implies:
      return Formula::implies(substitute(f.child(0), binding), substitute(f.child(1), binding));
    case FormulaKind::Iff:
      return Formula::iff(substitute(f.child(0), binding), substitute(f.child(1), binding));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(substitute(c, binding));
      return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Normal forms

/// Rewrites `imp` and `iff` away; the result uses only not/and/or and quantifiers.
inline Formula to_core(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Implies:
      return Formula::disjunction({Formula::negation(to_core(f.child(0))), to_core(f.child(1))});
    case FormulaKind::Iff: {
      Formula a = to_core(f.child(0)), b = to_core(f.child(1));
      return Formula::conjunction(
          {Formula::disjunction({Formula::negation(a), b}), Formula::disjunction({Formula::negation(b), a})});
    }
    case FormulaKind::Not:
      return Formula::negation(to_core(f.child()));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(to_core(c));
      return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
    case FormulaKind::Exists:
      return Formula::exists(f.var(), to_core(f.body()));
    case FormulaKind::Forall:
      return Formula::forall(f.var(), to_core(f.body()));
    default:
      return f;
  }
}

/// Negation normal form over not/and/or/exists/forall; nested and/or are flattened.
inline Formula nnf(const Formula& f, bool negate = false) {
  switch (f.kind()) {
    case FormulaKind::True:
      return negate ? Formula::falsity() : f;
    case FormulaKind::False:
      return negate ? Formula::truth() : f;
    case FormulaKind::Equal:
    case FormulaKind::Atom:
      return negate ? Formula::negation(f) : f;
    case FormulaKind::Not:
      return nnf(f.child(), !negate);
    case FormulaKind::Implies:
      return nnf(Formula::disjunction({Formula::negation(f.child(0)), f.child(1)}), negate);
    case FormulaKind::Iff:
      return nnf(to_core(f), negate);
    case FormulaKind::And:
    case FormulaKind::Or: {
      bool conj = (f.kind() == FormulaKind::And) != negate;
      std::vector<Formula> cs;
      for (const auto& c : f.children()) {
        Formula g = nnf(c, negate);
        FormulaKind same = conj ? FormulaKind::And : FormulaKind::Or;
        if (g.kind() == same)
          cs.insert(cs.end(), g.children().begin(), g.children().end());
        else
          cs.push_back(std::move(g));
      }
      return conj ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
    case FormulaKind::Exists:
      return negate ? Formula::forall(f.var(), nnf(f.body(), true)) : Formula::exists(f.var(), nnf(f.body()));
    case FormulaKind::Forall:
      return negate ? Formula::exists(f.var(), nnf(f.body(), true)) : Formula::forall(f.var(), nnf(f.body()));
  }
  return f;
}

/// Light structural normalization: flattens nested and/or, drops neutral
/// elements, unwraps one-element and/or. Does not reorder anything.
inline Formula normalize(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::And:
    case FormulaKind::Or: {
      bool conj = f.kind() == FormulaKind::And;
      std::vector<Formula> cs;
      for (const auto& c : f.children()) {
        Formula g = normalize(c);
        if (g.kind() == (conj ? FormulaKind::True : FormulaKind::False)) continue;
        if (g.kind() == f.kind())
          cs.insert(cs.end(), g.children().begin(), g.children().end());
        else
          cs.push_back(std::move(g));
      }
      return conj ? Formula::all_of(std::move(cs)) : Formula::any_of(std::move(cs));
    }
    case FormulaKind::Not:
      return Formula::negation(normalize(f.child()));
    case FormulaKind::Implies:
      return Formula::implies(normalize(f.child(0)), normalize(f.child(1)));
    case FormulaKind::Iff:
      return Formula::iff(normalize(f.child(0)), normalize(f.child(1)));
    case FormulaKind::Exists:
      return Formula::exists(f.var(), normalize(f.body()));
    case FormulaKind::Forall:
      return Formula::forall(f.var(), normalize(f.body()));
    default:
      return f;
  }
}

/// Universal closure over the free variables, in name order.
inline Formula universal_closure(const Formula& f) {
  auto fv = free_variables(f);
  return Formula::forall(std::vector<std::string>(fv.begin(), fv.end()), f);
}

}  // namespace ecl
