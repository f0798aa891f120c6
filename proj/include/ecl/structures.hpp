// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ecl/errors.hpp"
#include "ecl/sexpr.hpp"
#include "ecl/syntax.hpp"
#include "ecl/text.hpp"

namespace ecl {

using Element = std::size_t;
using Environment = std::map<std::string, Element>;

/// An explicit finite structure over elements 0..size-1. Function tables are
/// total; relation tables are characteristic vectors. Both are indexed by the
/// argument tuple read as a base-`size` numeral, first argument most
/// significant.
class FiniteStructure {
 public:
  FiniteStructure() = default;

  FiniteStructure(Signature sig, std::size_t size) : sig_(std::move(sig)), size_(size) {
    if (size_ == 0 && sig_.has_constants())
      throw InputError("the empty structure cannot interpret constants");
    for (const auto& [name, info] : sig_.symbols()) {
      std::size_t cells = table_size(info.arity);
      if (info.kind == SymbolKind::Function)
        functions_[name].assign(cells, 0);
      else
        relations_[name].assign(cells, 0);
    }
  }

  const Signature& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  std::size_t table_size(std::size_t arity) const {
    std::size_t cells = 1;
    for (std::size_t i = 0; i < arity; ++i) cells *= size_;
    return cells;
  }

  std::size_t index_of(std::span<const Element> args) const {
    std::size_t idx = 0;
    for (Element a : args) {
      if (a >= size_) throw InputError("element " + std::to_string(a) + " outside the domain");
      idx = idx * size_ + a;
    }
    return idx;
  }

  std::vector<Element> tuple_at(std::size_t index, std::size_t arity) const {
    std::vector<Element> out(arity);
    for (std::size_t i = arity; i-- > 0;) {
      out[i] = index % size_;
      index /= size_;
    }
    return out;
  }

  Element apply(const std::string& fn, std::span<const Element> args) const {
    return function_table(fn).at(index_of(args));
  }
  void set_function(const std::string& fn, std::span<const Element> args, Element value) {
    if (value >= size_) throw InputError("function value outside the domain");
    mutable_function_table(fn).at(index_of(args)) = value;
  }
  bool holds(const std::string& rel, std::span<const Element> args) const {
    return relation_table(rel).at(index_of(args)) != 0;
  }
  void set_relation(const std::string& rel, std::span<const Element> args, bool value) {
    mutable_relation_table(rel).at(index_of(args)) = value ? 1 : 0;
  }

  const std::vector<Element>& function_table(const std::string& fn) const {
    auto it = functions_.find(fn);
    if (it == functions_.end()) throw InputError("structure does not interpret function '" + fn + "'");
    return it->second;
  }
  std::vector<Element>& mutable_function_table(const std::string& fn) {
    auto it = functions_.find(fn);
    if (it == functions_.end()) throw InputError("structure does not interpret function '" + fn + "'");
    return it->second;
  }
  const std::vector<char>& relation_table(const std::string& rel) const {
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw InputError("structure does not interpret relation '" + rel + "'");
    return it->second;
  }
  std::vector<char>& mutable_relation_table(const std::string& rel) {
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw InputError("structure does not interpret relation '" + rel + "'");
    return it->second;
  }

  /// True when `sub` is a substructure of `*this` on the initial segment 0..sub.size()-1.
  bool extends(const FiniteStructure& sub) const {
    if (sub.size_ > size_) return false;
    for (const auto& [name, info] : sub.sig_.symbols()) {
      auto mine = sig_.lookup(name);
      if (!mine || !(*mine == info)) return false;
      for (std::size_t i = 0; i < sub.table_size(info.arity); ++i) {
        auto tuple = sub.tuple_at(i, info.arity);
        if (info.kind == SymbolKind::Function) {
          if (apply(name, tuple) != sub.apply(name, tuple)) return false;
        } else if (holds(name, tuple) != sub.holds(name, tuple)) {
          return false;
        }
      }
    }
    return true;
  }

  friend bool operator==(const FiniteStructure&, const FiniteStructure&) = default;

 private:
  Signature sig_;
  std::size_t size_ = 0;
  std::map<std::string, std::vector<Element>> functions_;
  std::map<std::string, std::vector<char>> relations_;
};

// ---------------------------------------------------------------------------
// Evaluation

inline Element eval_term(const FiniteStructure& m, const Term& t, const Environment& env) {
  if (t.is_var()) {
    auto it = env.find(t.name());
    if (it == env.end()) throw InputError("unbound variable '" + t.name() + "'");
    return it->second;
  }
  std::vector<Element> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(eval_term(m, a, env));
  return m.apply(t.name(), args);
}

/// Tarskian truth in a finite structure; quantifiers over the empty domain
/// make `forall` true and `exists` false.
inline bool eval_formula(const FiniteStructure& m, const Formula& f, Environment& env) {
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Equal:
      return eval_term(m, f.terms()[0], env) == eval_term(m, f.terms()[1], env);
    case FormulaKind::Atom: {
      std::vector<Element> args;
      for (const auto& t : f.terms()) args.push_back(eval_term(m, t, env));
      return m.holds(f.name(), args);
    }
    case FormulaKind::Not:
      return !eval_formula(m, f.child(), env);
    case FormulaKind::And:
      for (const auto& c : f.children())
        if (!eval_formula(m, c, env)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& c : f.children())
        if (eval_formula(m, c, env)) return true;
      return false;
    case FormulaKind::Implies:
      return !eval_formula(m, f.child(0), env) || eval_formula(m, f.child(1), env);
    case FormulaKind::Iff:
      return eval_formula(m, f.child(0), env) == eval_formula(m, f.child(1), env);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const bool want = f.kind() == FormulaKind::Exists;
      std::optional<Element> saved;
      if (auto it = env.find(f.var()); it != env.end()) saved = it->second;
      bool result = !want;
      for (Element a = 0; a < m.size(); ++a) {
        env[f.var()] = a;
        if (eval_formula(m, f.body(), env) == want) {
          result = want;
          break;
        }
      }
      if (saved)
        env[f.var()] = *saved;
      else
        env.erase(f.var());
      return result;
    }
  }
  return false;
}

inline bool eval_formula(const FiniteStructure& m, const Formula& f, const Environment& env = {}) {
  Environment copy = env;
  return eval_formula(m, f, copy);
}

// ---------------------------------------------------------------------------
// Enumeration

/// Streams every structure over `sig` with domain size 0..max_size (elements
/// named 0..n-1, no isomorphism reduction). The empty structure appears
/// exactly when the signature has no constants.
class StructureEnumerator {
 public:
  StructureEnumerator(Signature sig, std::size_t max_size, std::size_t max_count = 10'000'000)
      : sig_(std::move(sig)), max_size_(max_size), max_count_(max_count) {
    size_ = sig_.has_constants() ? 1 : 0;
  }

  std::optional<FiniteStructure> next() {
    while (size_ <= max_size_) {
      if (!started_) {
        start_size();
      } else if (!advance()) {
        ++size_;
        started_ = false;
        continue;
      }
      if (++produced_ > max_count_)
        throw ResourceLimit("structure enumeration exceeded " + std::to_string(max_count_) + " structures");
      return current_;
    }
    return std::nullopt;
  }

  std::size_t produced() const noexcept { return produced_; }

 private:
  struct Cell {
    bool function;
    std::string symbol;
    std::size_t index;
  };

  void start_size() {
    started_ = true;
    current_ = FiniteStructure(sig_, size_);
    cells_.clear();
    for (const auto& [name, info] : sig_.symbols()) {
      std::size_t n = current_.table_size(info.arity);
      for (std::size_t i = 0; i < n; ++i) cells_.push_back({info.kind == SymbolKind::Function, name, i});
    }
  }

  bool advance() {
    for (std::size_t k = cells_.size(); k-- > 0;) {
      const Cell& c = cells_[k];
      if (c.function) {
        auto& v = current_.mutable_function_table(c.symbol)[c.index];
        if (v + 1 < size_) {
          ++v;
          return true;
        }
        v = 0;
      } else {
        auto& v = current_.mutable_relation_table(c.symbol)[c.index];
        if (v == 0) {
          v = 1;
          return true;
        }
        v = 0;
      }
    }
    return false;
  }

  Signature sig_;
  std::size_t max_size_;
  std::size_t max_count_;
  std::size_t size_ = 0;
  bool started_ = false;
  std::size_t produced_ = 0;
  FiniteStructure current_;
  std::vector<Cell> cells_;
};

inline StructureEnumerator enumerate_structures(const Signature& sig, std::size_t max_size,
                                                std::size_t max_count = 10'000'000) {
  return StructureEnumerator(sig, max_size, max_count);
}

// ---------------------------------------------------------------------------
// Diagrams

struct Diagram {
  Signature expanded;                      // original signature plus one constant per element
  std::vector<std::string> element_names;  // constant naming element i
  std::vector<Formula> literals;
};

/// Name of the constant that denotes element `i` in a diagram over `sig`.
inline std::string element_constant(const Signature& sig, std::size_t i) {
  std::string name = "e" + std::to_string(i);
  while (sig.contains(name)) name = "e_" + name;
  return name;
}

/// Quantifier-free literals pinning `m` down: distinctness of all element
/// constants, every function table entry, and every relation tuple with its
/// sign.
inline Diagram diagram(const FiniteStructure& m) {
  Diagram d;
  d.expanded = m.signature();
  for (std::size_t i = 0; i < m.size(); ++i) {
    d.element_names.push_back(element_constant(m.signature(), i));
    d.expanded.add_constant(d.element_names.back());
  }
  auto name = [&](Element e) { return Term::constant(d.element_names[e]); };
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) d.literals.push_back(Formula::not_equal(name(i), name(j)));
  for (const auto& [sym, info] : m.signature().symbols()) {
    std::size_t cells = m.table_size(info.arity);
    for (std::size_t idx = 0; idx < cells; ++idx) {
      auto tuple = m.tuple_at(idx, info.arity);
      std::vector<Term> args;
      for (Element e : tuple) args.push_back(name(e));
      if (info.kind == SymbolKind::Function) {
        d.literals.push_back(Formula::equal(Term::app(sym, std::move(args)), name(m.apply(sym, tuple))));
      } else {
        Formula atom = Formula::atom(sym, std::move(args));
        d.literals.push_back(m.holds(sym, tuple) ? atom : Formula::negation(atom));
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Structure files:
//   (structure (domain N) (fun NAME ((args) val) ...) (rel NAME (tuple) ...))

inline FiniteStructure parse_structure(std::string_view text, const Signature& sig) {
  SExpr root = read_sexpr(text);
  if (root.head() != "structure") root.fail("expected (structure ...)");
  std::optional<FiniteStructure> m;
  std::map<std::string, std::vector<char>> seen;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& clause = root.items[i];
    auto head = clause.head();
    if (head == "domain") {
      if (m) clause.fail("duplicate domain clause");
      if (clause.items.size() != 2) clause.fail("expected (domain N)");
      m.emplace(sig, parse_natural(clause.items[1]));
      continue;
    }
    if (!m) clause.fail("the domain clause must come first");
    if (head != "fun" && head != "rel") clause.fail("expected (fun ...) or (rel ...)");
    if (clause.items.size() < 2 || clause.items[1].is_list) clause.fail("expected a symbol name");
    const std::string& sym = clause.items[1].atom;
    auto info = sig.lookup(sym);
    if (!info) detail::symbol_error(clause.items[1], "unknown symbol '" + sym + "'");
    const bool is_fun = head == "fun";
    if ((info->kind == SymbolKind::Function) != is_fun)
      detail::symbol_error(clause.items[1], "'" + sym + "' declared with a different kind");
    auto read_tuple = [&](const SExpr& e) {
      if (!e.is_list) e.fail("expected a tuple");
      if (e.items.size() != info->arity)
        detail::symbol_error(e, "arity mismatch for '" + sym + "': expected " + std::to_string(info->arity) +
                                    ", got " + std::to_string(e.items.size()));
      std::vector<Element> out;
      for (const auto& a : e.items) {
        Element v = parse_natural(a);
        if (v >= m->size()) a.fail("element outside the domain");
        out.push_back(v);
      }
      return out;
    };
    auto& marks = seen[sym];
    marks.resize(m->table_size(info->arity), 0);
    for (std::size_t k = 2; k < clause.items.size(); ++k) {
      const SExpr& entry = clause.items[k];
      if (is_fun) {
        if (!entry.is_list || entry.items.size() != 2) entry.fail("expected ((args) value)");
        auto tuple = read_tuple(entry.items[0]);
        Element v = parse_natural(entry.items[1]);
        if (v >= m->size()) entry.items[1].fail("element outside the domain");
        std::size_t idx = m->index_of(tuple);
        if (marks[idx]) entry.fail("duplicate table entry");
        marks[idx] = 1;
        m->set_function(sym, tuple, v);
      } else {
        m->set_relation(sym, read_tuple(entry), true);
      }
    }
  }
  if (!m) root.fail("missing (domain N) clause");
  for (const auto& [sym, info] : sig.symbols()) {
    if (info.kind != SymbolKind::Function) continue;
    auto it = seen.find(sym);
    std::size_t filled = 0;
    if (it != seen.end())
      for (char c : it->second) filled += c ? 1 : 0;
    if (filled != m->table_size(info.arity))
      throw InputError("function table for '" + sym + "' is not total");
  }
  return *m;
}

inline std::string print_structure(const FiniteStructure& m) {
  std::ostringstream os;
  os << "(structure (domain " << m.size() << ")";
  for (const auto& [sym, info] : m.signature().symbols()) {
    os << "\n  (" << (info.kind == SymbolKind::Function ? "fun " : "rel ") << sym;
    for (std::size_t idx = 0; idx < m.table_size(info.arity); ++idx) {
      auto tuple = m.tuple_at(idx, info.arity);
      std::string args = "(";
      for (std::size_t i = 0; i < tuple.size(); ++i) args += (i ? " " : "") + std::to_string(tuple[i]);
      args += ")";
      if (info.kind == SymbolKind::Function)
        os << " (" << args << ' ' << m.apply(sym, tuple) << ')';
      else if (m.holds(sym, tuple))
        os << ' ' << args;
    }
    os << ')';
  }
  os << ")\n";
  return os.str();
}

}  // namespace ecl
