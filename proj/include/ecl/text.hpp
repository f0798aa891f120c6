// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ecl/sexpr.hpp"
#include "ecl/syntax.hpp"

// Fully parenthesized prefix syntax for terms, formulas and signatures.
//
//   formula := true | false | P | (P t...) | (= t t) | (not f) | (and f...)
//            | (or f...) | (imp f f) | (iff f f) | (exists x f) | (forall x f)
//            | (exists (x y ...) f) | (forall (x y ...) f)
//   term    := x | c | (F t...)
//
// A bare identifier in term position is a constant when the signature
// declares it as a nullary function, otherwise a variable.

namespace ecl {

namespace detail {

inline const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k{"forall", "exists", "and", "or", "not", "imp", "iff", "=", "true", "false"};
  return k;
}

[[noreturn]] inline void symbol_error(const SExpr& at, const std::string& what) {
  throw SignatureError(what + " at line " + std::to_string(at.line) + ", column " + std::to_string(at.column));
}

inline void check_variable_name(const SExpr& e, const Signature& sig) {
  if (e.is_list || !is_identifier(e.atom) || keywords().count(e.atom)) e.fail("expected a variable name");
  if (sig.contains(e.atom)) symbol_error(e, "'" + e.atom + "' is a declared symbol and cannot be used as a variable");
}

inline Term term_from(const SExpr& e, const Signature& sig) {
  if (e.is_atom()) {
    if (!is_identifier(e.atom) || keywords().count(e.atom)) e.fail("expected a term, got '" + e.atom + "'");
    auto info = sig.lookup(e.atom);
    if (!info) return Term::var(e.atom);
    if (info->kind == SymbolKind::Relation) symbol_error(e, "relation '" + e.atom + "' used as a term");
    if (info->arity != 0)
      symbol_error(e, "arity mismatch for '" + e.atom + "': expected " + std::to_string(info->arity) + ", got 0");
    return Term::constant(e.atom);
  }
  if (e.items.empty() || e.items.front().is_list) e.fail("expected a function application");
  const std::string& name = e.items.front().atom;
  auto info = sig.lookup(name);
  if (!info) symbol_error(e.items.front(), "unknown function symbol '" + name + "'");
  if (info->kind == SymbolKind::Relation) symbol_error(e.items.front(), "relation '" + name + "' used as a term");
  if (info->arity != e.items.size() - 1)
    symbol_error(e, "arity mismatch for '" + name + "': expected " + std::to_string(info->arity) + ", got " +
                        std::to_string(e.items.size() - 1));
  std::vector<Term> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term_from(e.items[i], sig));
  return Term::app(name, std::move(args));
}

inline Formula formula_from(const SExpr& e, const Signature& sig) {
  if (e.is_atom()) {
    if (e.atom == "true") return Formula::truth();
    if (e.atom == "false") return Formula::falsity();
    auto info = sig.lookup(e.atom);
    if (!info) symbol_error(e, "unknown relation symbol '" + e.atom + "'");
    if (info->kind != SymbolKind::Relation || info->arity != 0)
      symbol_error(e, "'" + e.atom + "' is not a propositional symbol");
    return Formula::atom(e.atom);
  }
  if (e.items.empty()) e.fail("empty formula");
  if (e.items.front().is_list) e.fail("expected a connective or relation symbol");
  const std::string& head = e.items.front().atom;
  const std::size_t n = e.items.size() - 1;
  auto sub = [&](std::size_t i) { return formula_from(e.items[i], sig); };

  if (head == "=") {
    if (n != 2) symbol_error(e, "arity mismatch for '=': expected 2, got " + std::to_string(n));
    return Formula::equal(term_from(e.items[1], sig), term_from(e.items[2], sig));
  }
  if (head == "not") {
    if (n != 1) e.fail("'not' takes exactly one argument");
    return Formula::negation(sub(1));
  }
  if (head == "and" || head == "or") {
    std::vector<Formula> cs;
    for (std::size_t i = 1; i <= n; ++i) cs.push_back(sub(i));
    return head == "and" ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
  }
  if (head == "imp" || head == "iff") {
    if (n != 2) e.fail("'" + head + "' takes exactly two arguments");
    return head == "imp" ? Formula::implies(sub(1), sub(2)) : Formula::iff(sub(1), sub(2));
  }
  if (head == "exists" || head == "forall") {
    if (n != 2) e.fail("'" + head + "' takes a variable (or variable list) and a body");
    std::vector<std::string> vars;
    const SExpr& binder = e.items[1];
    if (binder.is_list) {
      if (binder.items.empty()) binder.fail("empty variable list");
      for (const auto& v : binder.items) {
        check_variable_name(v, sig);
        vars.push_back(v.atom);
      }
    } else {
      check_variable_name(binder, sig);
      vars.push_back(binder.atom);
    }
    Formula body = sub(2);
    return head == "exists" ? Formula::exists(vars, body) : Formula::forall(vars, body);
  }
  if (head == "true" || head == "false") e.fail("'" + head + "' takes no arguments");
  auto info = sig.lookup(head);
  if (!info) symbol_error(e.items.front(), "unknown relation symbol '" + head + "'");
  if (info->kind != SymbolKind::Relation) symbol_error(e.items.front(), "function '" + head + "' used as a formula");
  if (info->arity != n)
    symbol_error(e, "arity mismatch for '" + head + "': expected " + std::to_string(info->arity) + ", got " +
                        std::to_string(n));
  std::vector<Term> args;
  for (std::size_t i = 1; i <= n; ++i) args.push_back(term_from(e.items[i], sig));
  return Formula::atom(head, std::move(args));
}

}  // namespace detail

inline Term parse_term(std::string_view text, const Signature& sig) {
  return detail::term_from(read_sexpr(text), sig);
}

inline Formula parse_formula(std::string_view text, const Signature& sig) {
  return detail::formula_from(read_sexpr(text), sig);
}

inline Formula formula_from_sexpr(const SExpr& e, const Signature& sig) { return detail::formula_from(e, sig); }
inline Term term_from_sexpr(const SExpr& e, const Signature& sig) { return detail::term_from(e, sig); }

/// Parses every top-level formula in `text` (one file may hold a corpus).
inline std::vector<Formula> parse_formulas(std::string_view text, const Signature& sig) {
  std::vector<Formula> out;
  for (const auto& e : read_sexprs(text)) out.push_back(detail::formula_from(e, sig));
  return out;
}

inline void write_term(std::ostream& os, const Term& t) {
  if (t.is_var() || t.args().empty()) {
    os << t.name();
    return;
  }
  os << '(' << t.name();
  for (const auto& a : t.args()) {
    os << ' ';
    write_term(os, a);
  }
  os << ')';
}

inline void write_formula(std::ostream& os, const Formula& f) {
  auto nary = [&](const char* op) {
    os << '(' << op;
    for (const auto& c : f.children()) {
      os << ' ';
      write_formula(os, c);
    }
    os << ')';
  };
  switch (f.kind()) {
    case FormulaKind::True:
      os << "true";
      return;
    case FormulaKind::False:
      os << "false";
      return;
    case FormulaKind::Equal:
      os << "(= ";
      write_term(os, f.terms()[0]);
      os << ' ';
      write_term(os, f.terms()[1]);
      os << ')';
      return;
    case FormulaKind::Atom:
      if (f.terms().empty()) {
        os << f.name();
        return;
      }
      os << '(' << f.name();
      for (const auto& t : f.terms()) {
        os << ' ';
        write_term(os, t);
      }
      os << ')';
      return;
    case FormulaKind::Not:
      return nary("not");
    case FormulaKind::And:
      return nary("and");
    case FormulaKind::Or:
      return nary("or");
    case FormulaKind::Implies:
      return nary("imp");
    case FormulaKind::Iff:
      return nary("iff");
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      os << '(' << (f.kind() == FormulaKind::Exists ? "exists " : "forall ") << f.var() << ' ';
      write_formula(os, f.body());
      os << ')';
      return;
  }
}

inline std::string print_term(const Term& t) {
  std::ostringstream os;
  write_term(os, t);
  return os.str();
}

inline std::string print_formula(const Formula& f) {
  std::ostringstream os;
  write_formula(os, f);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Term& t) {
  write_term(os, t);
  return os;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  write_formula(os, f);
  return os;
}

/// Signature declarations `(fun NAME ARITY)`, `(rel NAME ARITY)`, `(const NAME)`.
inline void add_declaration(Signature& sig, const SExpr& d) {
  auto head = d.head();
  auto name_at = [&](std::size_t i) -> const std::string& {
    const SExpr& n = d.items.at(i);
    if (n.is_list || !is_identifier(n.atom) || detail::keywords().count(n.atom)) n.fail("expected a symbol name");
    return n.atom;
  };
  try {
    if (head == "const") {
      if (d.items.size() != 2) d.fail("expected (const NAME)");
      sig.add_constant(name_at(1));
    } else if (head == "fun" || head == "rel") {
      if (d.items.size() != 3) d.fail("expected (" + std::string(head) + " NAME ARITY)");
      const std::string& name = name_at(1);
      std::size_t arity = parse_natural(d.items[2]);
      if (head == "fun")
        sig.add_function(name, arity);
      else
        sig.add_relation(name, arity);
    } else {
      d.fail("expected a (fun ...), (rel ...) or (const ...) declaration");
    }
  } catch (const SignatureError& err) {
    detail::symbol_error(d, err.what());
  }
}

inline Signature parse_signature(std::string_view text) {
  Signature sig;
  for (const auto& d : read_sexprs(text)) add_declaration(sig, d);
  return sig;
}

inline std::string print_signature(const Signature& sig) {
  std::ostringstream os;
  for (const auto& [name, info] : sig.symbols()) {
    if (info.kind == SymbolKind::Function && info.arity == 0)
      os << "(const " << name << ")\n";
    else
      os << '(' << (info.kind == SymbolKind::Function ? "fun " : "rel ") << name << ' ' << info.arity << ")\n";
  }
  return os.str();
}

}  // namespace ecl
