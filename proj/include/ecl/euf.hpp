// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecl/errors.hpp"
#include "ecl/syntax.hpp"

// Ground reasoning over the empty theory. Variables are treated as fresh
// constants throughout, so validity here is validity of the universal
// closure.

namespace ecl {

/// Union-find over interned terms, closed under function congruence.
/// Relation literals are kept as (symbol, argument classes, polarity).
class CongruenceClosure {
 public:
  std::size_t intern(const Term& t) {
    if (auto it = ids_.find(t); it != ids_.end()) return it->second;
    std::vector<std::size_t> args;
    for (const auto& a : t.args()) args.push_back(intern(a));
    std::size_t id = terms_.size();
    ids_.emplace(t, id);
    terms_.push_back(t);
    nodes_.push_back({t.is_var(), t.name(), std::move(args)});
    parent_.push_back(id);
    dirty_ = true;
    return id;
  }

  std::size_t find(std::size_t a) const {
    while (parent_[a] != a) a = parent_[a];
    return a;
  }

  void merge(const Term& a, const Term& b) {
    std::size_t x = intern(a), y = intern(b);
    unite(x, y);
  }

  void assert_distinct(const Term& a, const Term& b) { distinct_.emplace_back(intern(a), intern(b)); }

  void assert_relation(const std::string& rel, const std::vector<Term>& args, bool positive) {
    std::vector<std::size_t> ids;
    for (const auto& t : args) ids.push_back(intern(t));
    relations_.push_back({rel, std::move(ids), positive});
  }

  /// Adds a literal (equality, relation atom, or the negation of one).
  /// Returns false for literals that are not of that shape.
  bool assert_literal(const Formula& lit) {
    bool positive = true;
    const Formula* a = &lit;
    if (a->kind() == FormulaKind::Not) {
      positive = false;
      a = &a->child();
    }
    if (a->kind() == FormulaKind::Equal) {
      if (positive)
        merge(a->terms()[0], a->terms()[1]);
      else
        assert_distinct(a->terms()[0], a->terms()[1]);
      return true;
    }
    if (a->kind() == FormulaKind::Atom) {
      assert_relation(a->name(), a->terms(), positive);
      return true;
    }
    if (a->kind() == FormulaKind::True || a->kind() == FormulaKind::False) {
      if ((a->kind() == FormulaKind::True) != positive) contradiction_ = true;
      return true;
    }
    return false;
  }

  /// Runs congruence propagation to a fixpoint.
  void close() {
    while (dirty_) {
      dirty_ = false;
      std::map<std::pair<std::string, std::vector<std::size_t>>, std::size_t> table;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.is_var) continue;
        std::vector<std::size_t> sig;
        for (std::size_t a : n.args) sig.push_back(find(a));
        auto [it, inserted] = table.emplace(std::make_pair(n.name, std::move(sig)), i);
        if (!inserted && find(it->second) != find(i)) unite(it->second, i);
      }
    }
  }

  bool consistent() {
    close();
    if (contradiction_) return false;
    for (auto [a, b] : distinct_)
      if (find(a) == find(b)) return false;
    std::map<std::pair<std::string, std::vector<std::size_t>>, bool> seen;
    for (const auto& r : relations_) {
      auto [it, inserted] = seen.emplace(std::make_pair(r.name, classes_of(r.args)), r.positive);
      if (!inserted && it->second != r.positive) return false;
    }
    return true;
  }

  /// Truth value of a literal's atom forced by the asserted literals, if any.
  /// Requires a prior call to consistent().
  std::optional<bool> entailed(const Formula& atom) {
    if (atom.kind() == FormulaKind::Equal) {
      std::size_t a = intern(atom.terms()[0]), b = intern(atom.terms()[1]);
      close();
      if (find(a) == find(b)) return true;
      for (auto [x, y] : distinct_) {
        std::size_t fx = find(x), fy = find(y);
        if ((fx == find(a) && fy == find(b)) || (fx == find(b) && fy == find(a))) return false;
      }
      return std::nullopt;
    }
    if (atom.kind() == FormulaKind::Atom) {
      std::vector<std::size_t> ids;
      for (const auto& t : atom.terms()) ids.push_back(intern(t));
      close();
      auto cls = classes_of(ids);
      for (const auto& r : relations_)
        if (r.name == atom.name() && classes_of(r.args) == cls) return r.positive;
      return std::nullopt;
    }
    if (atom.kind() == FormulaKind::True) return true;
    if (atom.kind() == FormulaKind::False) return false;
    return std::nullopt;
  }

  bool equivalent(const Term& a, const Term& b) {
    std::size_t x = intern(a), y = intern(b);
    close();
    return find(x) == find(y);
  }

  /// Classes of all interned terms, each sorted, in order of least member.
  std::vector<std::vector<Term>> classes() {
    close();
    std::map<std::size_t, std::vector<Term>> by_root;
    for (std::size_t i = 0; i < terms_.size(); ++i) by_root[find(i)].push_back(terms_[i]);
    std::vector<std::vector<Term>> out;
    for (auto& [root, members] : by_root) {
      std::sort(members.begin(), members.end());
      out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Node {
    bool is_var;
    std::string name;
    std::vector<std::size_t> args;
  };
  struct RelationLiteral {
    std::string name;
    std::vector<std::size_t> args;
    bool positive;
  };

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller id becomes the root, so the result does not depend on the order of merges.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    dirty_ = true;
  }

  std::vector<std::size_t> classes_of(const std::vector<std::size_t>& ids) const {
    std::vector<std::size_t> out;
    for (std::size_t a : ids) out.push_back(find(a));
    return out;
  }

  std::map<Term, std::size_t> ids_;
  std::vector<Term> terms_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> parent_;
  std::vector<std::pair<std::size_t, std::size_t>> distinct_;
  std::vector<RelationLiteral> relations_;
  bool dirty_ = false;
  bool contradiction_ = false;
};

/// Result of closing a set of ground literals.
struct ClosureResult {
  bool consistent = true;
  std::vector<std::vector<Term>> classes;  // meaningful only when consistent
};

inline ClosureResult congruence_close(const std::vector<Formula>& literals) {
  CongruenceClosure cc;
  for (const auto& l : literals)
    if (!cc.assert_literal(l)) throw InputError("congruence_close expects literals");
  ClosureResult r;
  r.consistent = cc.consistent();
  if (r.consistent) r.classes = cc.classes();
  return r;
}

/// A truth assignment to atoms, listed as literals.
using LiteralAssignment = std::vector<Formula>;

namespace detail {

// Three-valued evaluation of a formula over {not, and, or, imp, iff} under a
// partial assignment to its atoms: 1 true, 0 false, -1 unknown.
inline int eval3(const Formula& f, const std::map<Formula, bool>& value) {
  switch (f.kind()) {
    case FormulaKind::True:
      return 1;
    case FormulaKind::False:
      return 0;
    case FormulaKind::Equal:
    case FormulaKind::Atom: {
      auto it = value.find(f);
      return it == value.end() ? -1 : (it->second ? 1 : 0);
    }
    case FormulaKind::Not: {
      int v = eval3(f.child(), value);
      return v < 0 ? -1 : 1 - v;
    }
    case FormulaKind::And: {
      int r = 1;
      for (const auto& c : f.children()) {
        int v = eval3(c, value);
        if (v == 0) return 0;
        if (v < 0) r = -1;
      }
      return r;
    }
    case FormulaKind::Or: {
      int r = 0;
      for (const auto& c : f.children()) {
        int v = eval3(c, value);
        if (v == 1) return 1;
        if (v < 0) r = -1;
      }
      return r;
    }
    case FormulaKind::Implies: {
      int a = eval3(f.child(0), value), b = eval3(f.child(1), value);
      if (a == 0 || b == 1) return 1;
      if (a == 1 && b == 0) return 0;
      return -1;
    }
    case FormulaKind::Iff: {
      int a = eval3(f.child(0), value), b = eval3(f.child(1), value);
      if (a < 0 || b < 0) return -1;
      return a == b ? 1 : 0;
    }
    default:
      throw InputError("ground reasoning expects a quantifier-free formula");
  }
}

inline void ordered_atoms(const Formula& f, std::vector<Formula>& out, std::set<Formula>& seen) {
  if (f.is_atomic()) {
    if (seen.insert(f).second) out.push_back(f);
    return;
  }
  for (const auto& c : f.children()) ordered_atoms(c, out, seen);
}

// Case splitting over a clause form of the formula. Each and/or node of the
// negation normal form gets a selector variable that implies the node; the
// root selector is asserted. Search is plain DPLL with unit propagation,
// checking the asserted atoms with congruence closure after propagation and
// fixing any atom the closure decides.
class GroundSolver {
 public:
  GroundSolver(const Formula& f, std::size_t max_nodes) : max_nodes_(max_nodes) {
    if (!is_quantifier_free(f)) throw InputError("ground reasoning expects a quantifier-free formula");
    std::set<Formula> seen;
    ordered_atoms(f, atoms_, seen);
    for (std::size_t i = 0; i < atoms_.size(); ++i) atom_index_.emplace(atoms_[i], i);
    value_.assign(atoms_.size(), -1);
    clauses_.push_back({encode(nnf(f))});
  }

  std::optional<LiteralAssignment> solve() {
    if (!search()) return std::nullopt;
    LiteralAssignment out;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (value_[i] >= 0) out.push_back(value_[i] ? atoms_[i] : Formula::negation(atoms_[i]));
    return out;
  }

 private:
  // Literal 2v is variable v, 2v+1 its negation.
  static int negate(int lit) { return lit ^ 1; }

  int truth(int lit) const {
    int v = value_[static_cast<std::size_t>(lit >> 1)];
    return v < 0 ? -1 : ((lit & 1) ? 1 - v : v);
  }

  int fresh() {
    value_.push_back(-1);
    return static_cast<int>(value_.size() - 1) * 2;
  }

  int encode(const Formula& g) {
    switch (g.kind()) {
      case FormulaKind::Equal:
      case FormulaKind::Atom:
        return static_cast<int>(atom_index_.at(g)) * 2;
      case FormulaKind::Not:
        return negate(encode(g.child()));
      case FormulaKind::True:
      case FormulaKind::False: {
        int v = fresh();
        clauses_.push_back({g.kind() == FormulaKind::True ? v : negate(v)});
        return v;
      }
      default:
        break;
    }
    if (auto it = cache_.find(g); it != cache_.end()) return it->second;
    int sel = fresh();
    std::vector<int> kids;
    for (const auto& c : g.children()) kids.push_back(encode(c));
    if (g.kind() == FormulaKind::And) {
      for (int k : kids) clauses_.push_back({negate(sel), k});
    } else {
      kids.insert(kids.begin(), negate(sel));
      clauses_.push_back(std::move(kids));
    }
    cache_.emplace(g, sel);
    return sel;
  }

  void assign(int lit) {
    value_[static_cast<std::size_t>(lit >> 1)] = (lit & 1) ? 0 : 1;
    trail_.push_back(lit >> 1);
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[static_cast<std::size_t>(trail_.back())] = -1;
      trail_.pop_back();
    }
  }

  // Unit propagation and theory checks to a fixpoint; false on conflict.
  bool propagate() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& clause : clauses_) {
        int open = -1, unknown = 0;
        bool sat = false;
        for (int l : clause) {
          int t = truth(l);
          if (t == 1) {
            sat = true;
            break;
          }
          if (t < 0) {
            open = l;
            ++unknown;
          }
        }
        if (sat) continue;
        if (unknown == 0) return false;
        if (unknown == 1) {
          assign(open);
          changed = true;
        }
      }
      if (changed) continue;
      CongruenceClosure cc;
      for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (value_[i] >= 0) cc.assert_literal(value_[i] ? atoms_[i] : Formula::negation(atoms_[i]));
      if (!cc.consistent()) return false;
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (value_[i] >= 0) continue;
        if (auto v = cc.entailed(atoms_[i])) {
          assign(static_cast<int>(i) * 2 + (*v ? 0 : 1));
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    if (++nodes_ > max_nodes_)
      throw ResourceLimit("ground case split exceeded " + std::to_string(max_nodes_) + " nodes");
    if (!propagate()) return false;
    int pick = -1;
    for (const auto& clause : clauses_) {
      bool sat = false;
      int open = -1;
      for (int l : clause) {
        int t = truth(l);
        if (t == 1) {
          sat = true;
          break;
        }
        if (t < 0 && open < 0) open = l;
      }
      if (!sat) {
        pick = open;
        break;
      }
    }
    if (pick < 0) return true;
    const std::size_t mark = trail_.size();
    for (int lit : {pick, negate(pick)}) {
      assign(lit);
      if (search()) return true;
      undo(mark);
    }
    return false;
  }

  std::size_t max_nodes_;
  std::size_t nodes_ = 0;
  std::vector<Formula> atoms_;
  std::map<Formula, std::size_t> atom_index_;
  std::map<Formula, int> cache_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> value_;  // -1 unassigned, else 0 or 1; atoms first, then selectors
  std::vector<int> trail_;
};

}  // namespace detail

/// A consistent assignment to the atoms of `f` that makes it true, if any.
/// The assignment may be partial: unlisted atoms are irrelevant.
inline std::optional<LiteralAssignment> find_model(const Formula& f, const Limits& limits = {}) {
  return detail::GroundSolver(f, limits.max_search_nodes).solve();
}

inline bool ground_satisfiable(const Formula& f, const Limits& limits = {}) { return find_model(f, limits).has_value(); }

/// True iff `f` holds in every structure under every assignment.
inline bool ground_valid(const Formula& f, const Limits& limits = {}) {
  return !ground_satisfiable(Formula::negation(f), limits);
}

inline bool ground_equivalent(const Formula& a, const Formula& b, const Limits& limits = {}) {
  return ground_valid(Formula::iff(a, b), limits);
}

/// Cubes whose disjunction is equivalent to `f`, each a conjunction of
/// literals over the atoms of `f` that entails `f`. Found one model at a
/// time, blocking the cubes already listed. Each model is first shrunk to
/// the literals the propositional skeleton needs; with `irredundant`, also to
/// those needed modulo equality (one satisfiability check per literal).
/// Returns nullopt once more than `cap` cubes would be needed.
inline std::optional<std::vector<LiteralAssignment>> implicant_cover(const Formula& f, std::size_t cap,
                                                                     bool irredundant, const Limits& limits = {}) {
  std::vector<LiteralAssignment> cover;
  std::vector<Formula> blocked{f};
  const Formula negated = Formula::negation(f);
  while (auto model = find_model(Formula::all_of(blocked), limits)) {
    if (cover.size() == cap) return std::nullopt;
    LiteralAssignment cube = *model;
    std::map<Formula, bool> value;
    for (const auto& l : cube) value[l.kind() == FormulaKind::Not ? l.child() : l] = l.kind() != FormulaKind::Not;
    for (std::size_t i = 0; i < cube.size();) {
      const Formula& atom = cube[i].kind() == FormulaKind::Not ? cube[i].child() : cube[i];
      bool v = value.at(atom);
      value.erase(atom);
      if (detail::eval3(f, value) == 1) {
        cube.erase(cube.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        value[atom] = v;
        ++i;
      }
    }
    for (std::size_t i = 0; irredundant && i < cube.size();) {
      LiteralAssignment rest = cube;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      rest.push_back(negated);
      if (ground_satisfiable(Formula::all_of(rest), limits))
        ++i;
      else
        cube.erase(cube.begin() + static_cast<std::ptrdiff_t>(i));
    }
    blocked.push_back(Formula::negation(Formula::all_of(cube)));
    cover.push_back(std::move(cube));
  }
  return cover;
}

}  // namespace ecl
