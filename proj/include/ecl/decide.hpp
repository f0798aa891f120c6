// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecl/errors.hpp"
#include "ecl/euf.hpp"
#include "ecl/qe.hpp"
#include "ecl/structures.hpp"
#include "ecl/syntax.hpp"

namespace ecl {

enum class Verdict { Valid, Unsat, Contingent };

inline const char* verdict_token(Verdict v) {
  switch (v) {
    case Verdict::Valid:
      return "VALID";
    case Verdict::Unsat:
      return "UNSAT";
    case Verdict::Contingent:
      return "CONTINGENT";
  }
  return "?";
}

inline int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::Valid:
      return 0;
    case Verdict::Unsat:
      return 1;
    case Verdict::Contingent:
      return 2;
  }
  return 70;
}

struct DecisionResult {
  Verdict verdict = Verdict::Contingent;
  Formula equivalent = Formula::truth();        // quantifier-free image of the sentence
  std::optional<LiteralAssignment> satisfying;  // makes the image true, when one exists
  std::optional<LiteralAssignment> falsifying;  // makes the image false, when one exists
};

namespace detail {

inline DecisionResult classify(const Formula& image, const Formula& hypothesis, const Limits& limits) {
  DecisionResult r;
  r.equivalent = image;
  r.satisfying = find_model(Formula::all_of({hypothesis, image}), limits);
  r.falsifying = find_model(Formula::all_of({hypothesis, Formula::negation(image)}), limits);
  const bool valid = !r.falsifying;
  const bool unsat = !r.satisfying;
  if (valid && unsat) throw InvariantViolation("sentence and its negation both decided valid");
  r.verdict = valid ? Verdict::Valid : unsat ? Verdict::Unsat : Verdict::Contingent;
  return r;
}

}  // namespace detail

/// Decides a sentence in EC_L: eliminate quantifiers, then check the ground
/// image and its negation for validity.
inline DecisionResult decide(const Formula& f, const Signature& sig, const Limits& limits = {}) {
  check_formula(f, sig);
  if (!is_sentence(f)) throw InputError("decide expects a sentence");
  Formula g = eliminate(f, limits);
  if (!is_sentence(g) || !is_quantifier_free(g)) throw InvariantViolation("quantifier elimination left a non-ground formula");
  return detail::classify(g, Formula::truth(), limits);
}

/// Decides `f` in EC_L plus the diagram of `m`. That theory is complete, so
/// a contingent answer indicates a bug and raises InvariantViolation.
inline DecisionResult decide_with_diagram(const FiniteStructure& m, const Formula& f, const Limits& limits = {}) {
  Diagram d = diagram(m);
  check_formula(f, d.expanded);
  if (!is_sentence(f)) throw InputError("decide_with_diagram expects a sentence");
  Formula g = eliminate(f, limits);
  if (!is_sentence(g) || !is_quantifier_free(g)) throw InvariantViolation("quantifier elimination left a non-ground formula");
  DecisionResult r = detail::classify(g, Formula::all_of(d.literals), limits);
  if (r.verdict == Verdict::Contingent)
    throw InvariantViolation("sentence is contingent over a complete theory: " + print_formula(f));
  return r;
}

// ---------------------------------------------------------------------------
// Naive finite-model check

namespace detail {

// Searches for a falsifying structure of size at most `bound` for a
// quantifier-free matrix under some assignment of `vars`. Function and
// relation cells are fixed only when evaluation touches them; an untouched
// element is interchangeable with any other, so each choice ranges over the
// elements already used plus one new one.
class CountermodelSearch {
 public:
  CountermodelSearch(const Formula& matrix, std::vector<std::string> vars, std::size_t bound, std::size_t max_nodes)
      : matrix_(matrix), vars_(std::move(vars)), bound_(bound), max_nodes_(max_nodes) {}

  bool found() { return assign_vars(0); }

 private:
  using Cell = std::pair<std::string, std::vector<std::size_t>>;
  struct Missing {
    Cell cell;
    bool relation;
  };

  void tick() {
    if (++nodes_ > max_nodes_)
      throw ResourceLimit("finite-model check exceeded " + std::to_string(max_nodes_) + " nodes");
  }

  bool assign_vars(std::size_t i) {
    if (i == vars_.size()) return evaluate();
    std::size_t top = std::min(used_ + 1, bound_);
    for (std::size_t v = 0; v < top; ++v) {
      tick();
      bool fresh = v == used_;
      if (fresh) ++used_;
      env_[vars_[i]] = v;
      bool r = assign_vars(i + 1);
      if (fresh) --used_;
      if (r) return true;
    }
    env_.erase(vars_[i]);
    return false;
  }

  std::optional<std::size_t> term(const Term& t) {
    if (t.is_var()) return env_.at(t.name());
    std::vector<std::size_t> args;
    for (const auto& a : t.args()) {
      auto v = term(a);
      if (!v) return std::nullopt;
      args.push_back(*v);
    }
    Cell c{t.name(), std::move(args)};
    if (auto it = fun_.find(c); it != fun_.end()) return it->second;
    missing_ = Missing{std::move(c), false};
    return std::nullopt;
  }

  std::optional<bool> formula(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Equal: {
        auto a = term(f.terms()[0]);
        if (!a) return std::nullopt;
        auto b = term(f.terms()[1]);
        if (!b) return std::nullopt;
        return *a == *b;
      }
      case FormulaKind::Atom: {
        std::vector<std::size_t> args;
        for (const auto& t : f.terms()) {
          auto v = term(t);
          if (!v) return std::nullopt;
          args.push_back(*v);
        }
        Cell c{f.name(), std::move(args)};
        if (auto it = rel_.find(c); it != rel_.end()) return it->second;
        missing_ = Missing{std::move(c), true};
        return std::nullopt;
      }
      case FormulaKind::Not: {
        auto v = formula(f.child());
        if (!v) return std::nullopt;
        return !*v;
      }
      case FormulaKind::And:
      case FormulaKind::Or: {
        const bool conj = f.kind() == FormulaKind::And;
        for (const auto& c : f.children()) {
          auto v = formula(c);
          if (!v) return std::nullopt;
          if (*v != conj) return !conj;
        }
        return conj;
      }
      case FormulaKind::Implies: {
        auto a = formula(f.child(0));
        if (!a) return std::nullopt;
        if (!*a) return true;
        return formula(f.child(1));
      }
      case FormulaKind::Iff: {
        auto a = formula(f.child(0));
        if (!a) return std::nullopt;
        auto b = formula(f.child(1));
        if (!b) return std::nullopt;
        return *a == *b;
      }
      default:
        throw InputError("expected a quantifier-free matrix");
    }
  }

  bool evaluate() {
    tick();
    missing_.reset();
    auto v = formula(matrix_);
    if (v) return !*v;
    Missing m = *missing_;
    if (m.relation) {
      for (bool b : {false, true}) {
        rel_[m.cell] = b;
        if (evaluate()) return true;
      }
      rel_.erase(m.cell);
      return false;
    }
    std::size_t top = std::min(used_ + 1, bound_);
    for (std::size_t e = 0; e < top; ++e) {
      bool fresh = e == used_;
      if (fresh) ++used_;
      fun_[m.cell] = e;
      bool r = evaluate();
      if (fresh) --used_;
      if (r) return true;
    }
    fun_.erase(m.cell);
    return false;
  }

  Formula matrix_;
  std::vector<std::string> vars_;
  std::size_t bound_;
  std::size_t max_nodes_;
  std::size_t nodes_ = 0;
  std::size_t used_ = 0;
  std::map<std::string, std::size_t> env_;
  std::map<Cell, std::size_t> fun_;
  std::map<Cell, bool> rel_;
  std::optional<Missing> missing_;
};

}  // namespace detail

/// Size bound used by naive_universal_check: the number of distinct subterms
/// of the matrix, and at least one.
inline std::size_t naive_model_bound(const Formula& f) {
  auto [vars, matrix] = split_universal_prefix(f);
  return std::max<std::size_t>(subterms_of(matrix).size(), 1);
}

/// True iff the universal sentence `f` holds in every structure of size at
/// most naive_model_bound(f). Independent of the congruence-closure engine.
inline bool naive_universal_check(const Formula& f, const Signature& sig, const Limits& limits = {}) {
  check_formula(f, sig);
  if (!is_sentence(f) || !is_universal(f)) throw InputError("naive_universal_check expects a universal sentence");
  auto [vars, matrix] = split_universal_prefix(f);
  std::size_t bound = naive_model_bound(f);
  if (bound > limits.max_model)
    throw ResourceLimit("model bound " + std::to_string(bound) + " exceeds max-model " + std::to_string(limits.max_model));
  // Repeated prefix variables: only the innermost binding matters.
  std::vector<std::string> distinct;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    if (std::find(distinct.begin(), distinct.end(), *it) == distinct.end()) distinct.push_back(*it);
  return !detail::CountermodelSearch(matrix, distinct, bound, limits.max_search_nodes).found();
}

}  // namespace ecl
