// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <algorithm>

#include "ecl/decide.hpp"
#include "ecl/euf.hpp"
#include "ecl/oracle.hpp"
#include "ecl/random.hpp"
#include "ecl/text.hpp"

using namespace ecl;

namespace {

Signature cdef() { return parse_signature("(const c) (const d) (const e) (fun F 1)"); }

std::vector<Formula> literals(const std::string& text, const Signature& sig) { return parse_formulas(text, sig); }

// Propositional value of f once every atom has a truth value.
bool eval_atoms(const Formula& f, const std::map<Formula, bool>& value, bool unlisted) {
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Equal:
    case FormulaKind::Atom: {
      auto it = value.find(f);
      return it == value.end() ? unlisted : it->second;
    }
    case FormulaKind::Not:
      return !eval_atoms(f.child(), value, unlisted);
    case FormulaKind::And:
      return std::all_of(f.children().begin(), f.children().end(),
                         [&](const Formula& c) { return eval_atoms(c, value, unlisted); });
    case FormulaKind::Or:
      return std::any_of(f.children().begin(), f.children().end(),
                         [&](const Formula& c) { return eval_atoms(c, value, unlisted); });
    case FormulaKind::Implies:
      return !eval_atoms(f.child(0), value, unlisted) || eval_atoms(f.child(1), value, unlisted);
    case FormulaKind::Iff:
      return eval_atoms(f.child(0), value, unlisted) == eval_atoms(f.child(1), value, unlisted);
    default:
      throw std::logic_error("quantifier in ground formula");
  }
}

// Satisfiable in some structure of size at most the number of subterms:
// independent of the solver, by plain enumeration.
bool satisfiable_by_enumeration(const Formula& ground, const Signature& sig) {
  std::size_t bound = std::max<std::size_t>(subterms_of(ground).size(), 1);
  auto e = enumerate_structures(sig, bound);
  while (auto m = e.next())
    if (eval_formula(*m, ground)) return true;
  return false;
}

}  // namespace

TEST(Closure, Examples) {
  Signature sig = cdef();
  EXPECT_FALSE(congruence_close(literals("(= c d) (= (F c) e) (not (= (F d) e))", sig)).consistent);
  EXPECT_FALSE(congruence_close(literals("(= (F c) c) (not (= (F (F c)) c))", sig)).consistent);
  auto r = congruence_close(literals("(not (= c d))", sig));
  ASSERT_TRUE(r.consistent);
  ASSERT_EQ(r.classes.size(), 2u);
  EXPECT_EQ(r.classes[0], std::vector<Term>{Term::constant("c")});
  EXPECT_EQ(r.classes[1], std::vector<Term>{Term::constant("d")});
}

TEST(Closure, RelationsAcrossCongruentTuples) {
  Signature sig = parse_signature("(const c) (const d) (rel P 1) (fun F 1)");
  EXPECT_FALSE(congruence_close(literals("(= c d) (P (F c)) (not (P (F d)))", sig)).consistent);
  EXPECT_TRUE(congruence_close(literals("(P (F c)) (not (P (F d)))", sig)).consistent);
}

TEST(Closure, OrderInsensitive) {
  Rng rng(61);
  Signature sig = parse_signature("(const c) (const d) (fun F 1) (fun G 2) (rel P 1)");
  for (int k = 0; k < 100; ++k) {
    std::vector<Formula> lits;
    std::size_t n = 2 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) lits.push_back(random_literal(rng, sig, {}, 2));
    auto base = congruence_close(lits);
    for (int j = 0; j < 5; ++j) {
      std::shuffle(lits.begin(), lits.end(), rng);
      auto again = congruence_close(lits);
      EXPECT_EQ(again.consistent, base.consistent);
      if (base.consistent) {
        EXPECT_EQ(again.classes, base.classes);
      }
    }
  }
}

TEST(GroundValid, Examples) {
  Signature sig = cdef();
  EXPECT_TRUE(ground_valid(parse_formula("(imp (and (= c d) (= (F c) e)) (= (F d) e))", sig)));
  EXPECT_FALSE(ground_valid(parse_formula("(= c d)", sig)));
  EXPECT_TRUE(ground_valid(parse_formula("(imp (= x y) (= (F x) (F y)))", sig)));
  EXPECT_TRUE(ground_valid(Formula::truth()));
  EXPECT_FALSE(ground_valid(Formula::falsity()));
}

TEST(GroundValid, NeverBothWithAtoms) {
  Rng rng(67);
  Signature sig = parse_signature("(const c) (fun F 1) (rel P 1) (rel Q 0)");
  for (int k = 0; k < 200; ++k) {
    Formula f = random_open(rng, sig, {"x"}, rng.below(4), 1);
    std::set<Formula> atoms;
    collect_atoms(f, atoms);
    if (ground_valid(f) && ground_valid(Formula::negation(f))) ADD_FAILURE() << print_formula(f);
    if (atoms.empty()) {
      EXPECT_TRUE(ground_valid(f) || ground_valid(Formula::negation(f)));
    }
  }
}

TEST(GroundValid, ModelsAreGenuine) {
  Rng rng(71);
  Signature sig = parse_signature("(const c) (const d) (fun F 1) (rel P 1)");
  for (int k = 0; k < 200; ++k) {
    Formula f = random_open(rng, sig, {}, 1 + rng.below(4), 2);
    auto model = find_model(f);
    if (!model) continue;
    EXPECT_TRUE(congruence_close(*model).consistent);
    std::map<Formula, bool> value;
    for (const auto& l : *model)
      value[l.kind() == FormulaKind::Not ? l.child() : l] = l.kind() != FormulaKind::Not;
    EXPECT_TRUE(eval_atoms(f, value, false)) << print_formula(f);
    EXPECT_TRUE(eval_atoms(f, value, true)) << print_formula(f);
  }
}

TEST(GroundValid, AgreesWithFiniteEnumeration) {
  Rng rng(73);
  Signature sig = parse_signature("(const c) (const d) (fun F 1)");
  std::size_t sat = 0;
  for (int k = 0; k < 150; ++k) {
    Formula f = random_open(rng, sig, {}, rng.below(4), 1);
    if (subterms_of(f).size() > 4) continue;
    bool expected = satisfiable_by_enumeration(f, sig);
    EXPECT_EQ(ground_satisfiable(f), expected) << print_formula(f);
    sat += expected ? 1 : 0;
  }
  EXPECT_GT(sat, 0u);
}

TEST(GroundValid, AgreesWithNaiveUniversalCheck) {
  SuiteReport r = run_euf_suite(100, 79);
  for (const auto& f : r.failures) ADD_FAILURE() << f;
  EXPECT_EQ(r.passed, r.total);
  EXPECT_GT(r.positives, 0u);
  EXPECT_LT(r.positives, r.total);
}

TEST(GroundValid, SearchNodeCap) {
  Limits tight;
  tight.max_search_nodes = 1;
  Signature sig = cdef();
  Formula f = parse_formula("(or (and (= c d) (not (= (F c) (F d)))) (and (= c e) (not (= (F c) (F e)))))", sig);
  EXPECT_THROW(ground_satisfiable(f, tight), ResourceLimit);
}
