// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecl/errors.hpp"
#include "ecl/sexpr.hpp"
#include "ecl/structures.hpp"
#include "ecl/syntax.hpp"

// Quantifier-free arithmetic theories: numerals, finite function and
// predicate tables, Cantor pairing, and finite fragments of Robinson's R.

namespace ecl {

inline std::uint64_t cantor_pair(std::uint64_t n, std::uint64_t m) { return (n + m) * (n + m + 1) / 2 + n; }

inline std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t p) {
  // w is the largest integer with w(w+1)/2 <= p.
  auto w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(p) + 1.0) - 1.0) / 2.0);
  while (w * (w + 1) / 2 > p) --w;
  while ((w + 1) * (w + 2) / 2 <= p) ++w;
  std::uint64_t n = p - w * (w + 1) / 2;
  return {n, w - n};
}

enum class NumeralStyle { Constants, Successor, Tprfu };

inline const char* zero_symbol() { return "zero"; }
inline const char* successor_symbol() { return "S"; }
inline const char* universal_symbol() { return "U"; }

inline std::string numeral_constant(std::size_t n) { return "num_" + std::to_string(n); }

/// Closed term denoting n: the constant num_n, S^n(zero), or n-fold
/// U(num_0, ...) around num_0.
inline Term numeral(std::size_t n, NumeralStyle style) {
  switch (style) {
    case NumeralStyle::Constants:
      return Term::constant(numeral_constant(n));
    case NumeralStyle::Successor: {
      Term t = Term::constant(zero_symbol());
      for (std::size_t i = 0; i < n; ++i) t = Term::app(successor_symbol(), {t});
      return t;
    }
    case NumeralStyle::Tprfu: {
      Term z = Term::constant(numeral_constant(0));
      Term t = z;
      for (std::size_t i = 0; i < n; ++i) t = Term::app(universal_symbol(), {z, t});
      return t;
    }
  }
  return Term::constant(zero_symbol());
}

struct FunctionTable {
  std::size_t arity = 0;
  std::map<std::vector<std::size_t>, std::size_t> entries;
};

struct PredicateTable {
  std::size_t arity = 0;
  std::set<std::vector<std::size_t>> positive;
  std::set<std::vector<std::size_t>> negative;
};

struct RepTables {
  std::size_t numerals = 0;
  std::map<std::string, FunctionTable> functions;
  std::map<std::string, PredicateTable> predicates;
};

inline void validate(const RepTables& t) {
  auto in_range = [&](const std::vector<std::size_t>& tuple, std::size_t arity, const std::string& name) {
    if (tuple.size() != arity) throw InputError("tuple of wrong length in table '" + name + "'");
    for (auto v : tuple)
      if (v >= t.numerals) throw InputError("value " + std::to_string(v) + " out of numeral range in '" + name + "'");
  };
  for (const auto& [name, f] : t.functions)
    for (const auto& [args, v] : f.entries) {
      in_range(args, f.arity, name);
      in_range({v}, 1, name);
    }
  for (const auto& [name, p] : t.predicates) {
    for (const auto& a : p.positive) in_range(a, p.arity, name);
    for (const auto& a : p.negative) {
      in_range(a, p.arity, name);
      if (p.positive.count(a)) throw InputError("predicate '" + name + "' lists a tuple as both positive and negative");
    }
  }
}

inline Signature trep_signature(const RepTables& t, NumeralStyle style) {
  Signature sig;
  switch (style) {
    case NumeralStyle::Constants:
      for (std::size_t i = 0; i < t.numerals; ++i) sig.add_constant(numeral_constant(i));
      break;
    case NumeralStyle::Successor:
      sig.add_constant(zero_symbol());
      sig.add_function(successor_symbol(), 1);
      break;
    case NumeralStyle::Tprfu:
      sig.add_constant(numeral_constant(0));
      sig.add_function(universal_symbol(), 2);
      break;
  }
  for (const auto& [name, f] : t.functions) sig.add_function(name, f.arity);
  for (const auto& [name, p] : t.predicates) sig.add_relation(name, p.arity);
  return sig;
}

/// Numeral distinctness, one equation per function entry, one signed
/// literal per predicate tuple.
inline std::vector<Formula> trep_axioms(const RepTables& t, NumeralStyle style) {
  validate(t);
  std::vector<Formula> out;
  for (std::size_t n = 0; n < t.numerals; ++n)
    for (std::size_t m = n + 1; m < t.numerals; ++m)
      out.push_back(Formula::not_equal(numeral(n, style), numeral(m, style)));
  auto nums = [&](const std::vector<std::size_t>& tuple) {
    std::vector<Term> ts;
    for (auto v : tuple) ts.push_back(numeral(v, style));
    return ts;
  };
  for (const auto& [name, f] : t.functions)
    for (const auto& [args, v] : f.entries) out.push_back(Formula::equal(Term::app(name, nums(args)), numeral(v, style)));
  for (const auto& [name, p] : t.predicates) {
    for (const auto& a : p.positive) out.push_back(Formula::atom(name, nums(a)));
    for (const auto& a : p.negative) out.push_back(Formula::negation(Formula::atom(name, nums(a))));
  }
  return out;
}

/// The standard model restricted to [0, N): numerals denote themselves,
/// table entries are copied, every value outside the tables is 0.
inline FiniteStructure table_structure(const RepTables& t, NumeralStyle style) {
  validate(t);
  if (t.numerals == 0) throw InputError("tables need at least one numeral");
  FiniteStructure m(trep_signature(t, style), t.numerals);
  const std::size_t n = t.numerals;
  switch (style) {
    case NumeralStyle::Constants:
      for (std::size_t i = 0; i < n; ++i) m.set_function(numeral_constant(i), {}, i);
      break;
    case NumeralStyle::Successor:
      for (std::size_t i = 0; i + 1 < n; ++i) m.set_function(successor_symbol(), std::vector<Element>{i}, i + 1);
      break;
    case NumeralStyle::Tprfu:
      for (std::size_t i = 0; i + 1 < n; ++i) m.set_function(universal_symbol(), std::vector<Element>{0, i}, i + 1);
      break;
  }
  for (const auto& [name, f] : t.functions)
    for (const auto& [args, v] : f.entries) m.set_function(name, args, v);
  for (const auto& [name, p] : t.predicates)
    for (const auto& a : p.positive) m.set_relation(name, a, true);
  return m;
}

// ---------------------------------------------------------------------------
// Robinson's R

inline const char* add_symbol() { return "add"; }
inline const char* mul_symbol() { return "mul"; }
inline const char* less_symbol() { return "lt"; }

inline Signature r_signature() {
  Signature s;
  s.add_constant(zero_symbol());
  s.add_function(successor_symbol(), 1);
  s.add_function(add_symbol(), 2);
  s.add_function(mul_symbol(), 2);
  s.add_relation(less_symbol(), 2);
  return s;
}

/// The order axiom for a single n (any n, not only n <= b).
inline Formula r_order_axiom(std::size_t n) {
  Term x = Term::var("x");
  Formula less = Formula::atom(less_symbol(), {x, numeral(n, NumeralStyle::Successor)});
  if (n == 0) return Formula::forall("x", Formula::negation(less));
  std::vector<Formula> cases;
  for (std::size_t i = 0; i < n; ++i) cases.push_back(Formula::equal(x, numeral(i, NumeralStyle::Successor)));
  return Formula::forall("x", Formula::iff(less, Formula::any_of(std::move(cases))));
}

/// Addition and multiplication facts for n, m <= b, and for n <= b
///   forall x (x < n  <->  x = 0 or ... or x = n-1),
/// written as forall x not(x < 0) when n = 0.
inline std::vector<Formula> r_axioms(std::size_t b) {
  auto num = [](std::size_t n) { return numeral(n, NumeralStyle::Successor); };
  std::vector<Formula> out;
  for (std::size_t n = 0; n <= b; ++n)
    for (std::size_t m = 0; m <= b; ++m) out.push_back(Formula::equal(Term::app(add_symbol(), {num(n), num(m)}), num(n + m)));
  for (std::size_t n = 0; n <= b; ++n)
    for (std::size_t m = 0; m <= b; ++m) out.push_back(Formula::equal(Term::app(mul_symbol(), {num(n), num(m)}), num(n * m)));
  for (std::size_t n = 0; n <= b; ++n) out.push_back(r_order_axiom(n));
  return out;
}

/// The standard model with every number above b+1 identified into one
/// element (the last one, index b+2). Operations are computed on
/// representatives and collapsed. On the collapsed element the order is
/// reflexive, since two distinct numbers above b+1 are comparable.
inline FiniteStructure r_fragment_model(std::size_t b) {
  const std::size_t top = b + 2;
  FiniteStructure m(r_signature(), b + 3);
  auto collapse = [&](std::size_t v) { return v > b + 1 ? top : v; };
  m.set_function(zero_symbol(), {}, 0);
  for (std::size_t a = 0; a <= top; ++a) {
    m.set_function(successor_symbol(), std::vector<Element>{a}, collapse(a + 1));
    for (std::size_t c = 0; c <= top; ++c) {
      std::vector<Element> args{a, c};
      m.set_function(add_symbol(), args, collapse(a + c));
      m.set_function(mul_symbol(), args, collapse(a * c));
      m.set_relation(less_symbol(), args, a < c || (a == top && c == top));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Tables files:
//   (tables (numerals N) (fun NAME ARITY ((args) val) ...)
//           (pred NAME ARITY (pos (tuple) ...) (neg (tuple) ...)))

inline RepTables parse_tables(std::string_view text) {
  SExpr root = read_sexpr(text);
  if (root.head() != "tables") root.fail("expected (tables ...)");
  RepTables t;
  auto tuple = [](const SExpr& e) {
    if (!e.is_list) e.fail("expected a tuple");
    std::vector<std::size_t> out;
    for (const auto& a : e.items) out.push_back(parse_natural(a));
    return out;
  };
  std::set<std::string> names;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& c = root.items[i];
    auto head = c.head();
    if (head == "numerals") {
      if (c.items.size() != 2) c.fail("expected (numerals N)");
      t.numerals = parse_natural(c.items[1]);
      continue;
    }
    if (head != "fun" && head != "pred") c.fail("expected (numerals ...), (fun ...) or (pred ...)");
    if (c.items.size() < 3 || c.items[1].is_list || !is_identifier(c.items[1].atom)) c.fail("expected NAME ARITY");
    const std::string& name = c.items[1].atom;
    if (!names.insert(name).second) c.items[1].fail("duplicate table '" + name + "'");
    std::size_t arity = parse_natural(c.items[2]);
    if (head == "fun") {
      FunctionTable f{arity, {}};
      for (std::size_t k = 3; k < c.items.size(); ++k) {
        const SExpr& e = c.items[k];
        if (!e.is_list || e.items.size() != 2) e.fail("expected ((args) value)");
        auto args = tuple(e.items[0]);
        if (args.size() != arity) e.fail("arity mismatch in table '" + name + "'");
        if (!f.entries.emplace(args, parse_natural(e.items[1])).second) e.fail("duplicate table entry");
      }
      t.functions.emplace(name, std::move(f));
    } else {
      PredicateTable p{arity, {}, {}};
      for (std::size_t k = 3; k < c.items.size(); ++k) {
        const SExpr& e = c.items[k];
        auto sign = e.head();
        if (sign != "pos" && sign != "neg") e.fail("expected (pos ...) or (neg ...)");
        for (std::size_t j = 1; j < e.items.size(); ++j) {
          auto a = tuple(e.items[j]);
          if (a.size() != arity) e.items[j].fail("arity mismatch in table '" + name + "'");
          (sign == "pos" ? p.positive : p.negative).insert(a);
        }
      }
      t.predicates.emplace(name, std::move(p));
    }
  }
  validate(t);
  return t;
}

}  // namespace ecl
