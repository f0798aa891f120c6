// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include "ecl/decide.hpp"
#include "ecl/random.hpp"
#include "ecl/text.hpp"

using namespace ecl;

namespace {

Verdict verdict_of(const std::string& sig_text, const std::string& formula) {
  Signature sig = parse_signature(sig_text);
  return decide(parse_formula(formula, sig), sig).verdict;
}

// Plain enumeration of every structure up to the bound; the reference for
// the lazy countermodel search.
bool holds_in_all_small_structures(const Formula& f, const Signature& sig, std::size_t bound) {
  auto e = enumerate_structures(sig, bound);
  while (auto m = e.next())
    if (!eval_formula(*m, f)) return false;
  return true;
}

}  // namespace

TEST(Decide, Fixtures) {
  EXPECT_EQ(verdict_of("(fun L 1) (fun R 1)", "(forall (x y) (exists z (and (= (L z) x) (= (R z) y))))"),
            Verdict::Valid);
  EXPECT_EQ(verdict_of("(fun F 1)", "(forall (x y) (exists z (and (not (= z x)) (= (F z) y))))"), Verdict::Valid);
  EXPECT_EQ(verdict_of("(const c) (const d)", "(= c d)"), Verdict::Contingent);
  EXPECT_EQ(verdict_of("(fun F 1)", "(exists x (not (= x x)))"), Verdict::Unsat);
}

TEST(Decide, ContingentCarriesBothAssignments) {
  Signature sig = parse_signature("(const c) (const d)");
  auto r = decide(parse_formula("(= c d)", sig), sig);
  ASSERT_EQ(r.verdict, Verdict::Contingent);
  ASSERT_TRUE(r.satisfying.has_value());
  ASSERT_TRUE(r.falsifying.has_value());
  EXPECT_EQ(verdict_token(r.verdict), std::string("CONTINGENT"));
  EXPECT_EQ(verdict_exit_code(r.verdict), 2);
}

TEST(Decide, RejectsOpenFormulas) {
  Signature sig = parse_signature("(fun F 1)");
  EXPECT_THROW(decide(parse_formula("(= (F x) x)", sig), sig), InputError);
  EXPECT_THROW(decide(parse_formula("(= (G x) x)", parse_signature("(fun G 1)")), sig), SignatureError);
}

TEST(Decide, NegationSymmetry) {
  Rng rng(83);
  for (int k = 0; k < 150; ++k) {
    Signature sig = random_signature(rng);
    Formula f = random_sentence(rng, sig, {2, 2, 1});
    Verdict a = decide(f, sig).verdict;
    Verdict b = decide(Formula::negation(f), sig).verdict;
    EXPECT_EQ(a == Verdict::Valid, b == Verdict::Unsat) << print_formula(f);
    EXPECT_EQ(a == Verdict::Unsat, b == Verdict::Valid) << print_formula(f);
    EXPECT_EQ(a == Verdict::Contingent, b == Verdict::Contingent) << print_formula(f);
  }
}

// A universal sentence provable in EC_L is provable outright, so it holds in
// every finite structure; dually for existential sentences decided Unsat.
TEST(Decide, SoundOnRandomStructures) {
  Rng rng(89);
  std::size_t checked = 0;
  for (int k = 0; k < 400; ++k) {
    Signature sig = random_signature(rng);
    Formula body = random_open(rng, sig, {"x", "y"}, rng.below(3), 1);
    auto fv = free_variables(body);
    std::vector<std::string> vars(fv.begin(), fv.end());
    bool universal = rng.chance(1, 2);
    Formula f = vars.empty() ? body : universal ? Formula::forall(vars, body) : Formula::exists(vars, body);
    Verdict v = decide(f, sig).verdict;
    bool expect_true;
    if (universal && v == Verdict::Valid)
      expect_true = true;
    else if (!universal && v == Verdict::Unsat)
      expect_true = false;
    else
      continue;
    ++checked;
    for (int j = 0; j < 100; ++j) {
      FiniteStructure m = random_structure(rng, sig, rng.below(4));
      ASSERT_EQ(eval_formula(m, f), expect_true) << print_formula(f) << "\n" << print_structure(m);
    }
  }
  EXPECT_GT(checked, 20u);
}

TEST(Decide, SingleConstantIsComplete) {
  Rng rng(97);
  Signature sig = parse_signature("(const c)");
  for (int k = 0; k < 50; ++k) {
    Formula f = random_sentence(rng, sig, {2, 2, 1});
    EXPECT_NE(decide(f, sig).verdict, Verdict::Contingent) << print_formula(f);
  }
}

TEST(Decide, NoNullarySymbolsIsComplete) {
  Rng rng(101);
  Signature sig = parse_signature("(fun F 1) (fun G 2) (rel P 1)");
  for (int k = 0; k < 50; ++k) {
    Formula f = random_sentence(rng, sig, {2, 2, 1});
    EXPECT_NE(decide(f, sig).verdict, Verdict::Contingent) << print_formula(f);
  }
}

TEST(DecideDiagram, Examples) {
  Signature sig = parse_signature("(fun F 1)");
  FiniteStructure m = parse_structure("(structure (domain 2) (fun F ((0) 1) ((1) 1)))", sig);
  Signature ex = diagram(m).expanded;
  EXPECT_EQ(decide_with_diagram(m, parse_formula("(exists x (= (F x) x))", ex)).verdict, Verdict::Valid);
  EXPECT_EQ(decide_with_diagram(m, parse_formula("(= e0 e1)", ex)).verdict, Verdict::Unsat);
  EXPECT_EQ(decide_with_diagram(m, parse_formula("(= (F e0) e1)", ex)).verdict, Verdict::Valid);
  FiniteStructure empty(parse_signature("(rel P 1)"), 0);
  EXPECT_EQ(decide_with_diagram(empty, parse_formula("(exists x (P x))", empty.signature())).verdict, Verdict::Valid);
}

TEST(DecideDiagram, NeverContingent) {
  Rng rng(103);
  for (int k = 0; k < 10; ++k) {
    Signature sig = random_signature(rng);
    FiniteStructure m = random_structure(rng, sig, 1 + rng.below(3));
    Diagram d = diagram(m);
    for (int j = 0; j < 10; ++j) {
      Formula f = random_sentence(rng, d.expanded, {2, 2, 1});
      DecisionResult r;
      ASSERT_NO_THROW(r = decide_with_diagram(m, f)) << print_formula(f);
      EXPECT_NE(r.verdict, Verdict::Contingent);
    }
  }
}

// Quantifier-free sentences over the diagram are settled by the structure itself.
TEST(DecideDiagram, GroundSentencesFollowTheStructure) {
  Rng rng(107);
  Signature sig = parse_signature("(fun F 1) (rel P 1) (const c)");
  for (int k = 0; k < 20; ++k) {
    FiniteStructure m = random_structure(rng, sig, 1 + rng.below(3));
    Diagram d = diagram(m);
    FiniteStructure named(d.expanded, m.size());
    named.mutable_function_table("F") = m.function_table("F");
    named.mutable_function_table("c") = m.function_table("c");
    named.mutable_relation_table("P") = m.relation_table("P");
    for (std::size_t i = 0; i < m.size(); ++i) named.mutable_function_table(d.element_names[i])[0] = i;
    for (int j = 0; j < 10; ++j) {
      Formula f = random_open(rng, d.expanded, {}, rng.below(3), 1);
      Verdict v = decide_with_diagram(m, f).verdict;
      EXPECT_EQ(v == Verdict::Valid, eval_formula(named, f)) << print_formula(f);
    }
  }
}

TEST(Naive, Examples) {
  Signature f = parse_signature("(fun F 1)");
  EXPECT_FALSE(naive_universal_check(parse_formula("(forall x (= (F (F x)) x))", f), f));
  EXPECT_EQ(naive_model_bound(parse_formula("(forall x (= (F (F x)) x))", f)), 3u);
  EXPECT_TRUE(naive_universal_check(parse_formula("(forall x (= x x))", f), f));
  Signature none;
  EXPECT_FALSE(naive_universal_check(parse_formula("(forall (x y) (= x y))", none), none));
}

TEST(Naive, ModelCap) {
  Signature f = parse_signature("(fun F 1)");
  Limits tight;
  tight.max_model = 2;
  EXPECT_THROW(naive_universal_check(parse_formula("(forall x (= (F (F x)) x))", f), f, tight), ResourceLimit);
  EXPECT_THROW(naive_universal_check(parse_formula("(exists x (= x x))", f), f), InputError);
}

TEST(Naive, AgreesWithExhaustiveEnumeration) {
  Rng rng(109);
  SignatureShape shape;
  shape.max_arity = 1;
  std::size_t valid = 0, total = 0;
  for (int k = 0; k < 300 && total < 120; ++k) {
    Signature sig = random_signature(rng, shape);
    Formula body = random_open(rng, sig, {"x", "y"}, rng.below(3), 1);
    auto fv = free_variables(body);
    Formula f = Formula::forall(std::vector<std::string>(fv.begin(), fv.end()), body);
    std::size_t bound = naive_model_bound(f);
    if (bound > 3) continue;
    bool expected = holds_in_all_small_structures(f, sig, bound);
    EXPECT_EQ(naive_universal_check(f, sig), expected) << print_formula(f);
    valid += expected ? 1 : 0;
    ++total;
  }
  EXPECT_GT(total, 50u);
  EXPECT_GT(valid, 0u);
  EXPECT_LT(valid, total);
}
