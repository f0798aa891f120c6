// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <algorithm>

#include "ecl/decide.hpp"
#include "ecl/random.hpp"
#include "ecl/text.hpp"
#include "ecl/trep.hpp"

using namespace ecl;

namespace {

bool contains(const std::vector<Formula>& fs, const Formula& f) { return std::find(fs.begin(), fs.end(), f) != fs.end(); }

Formula parse_r(const std::string& text) { return parse_formula(text, r_signature()); }

}  // namespace

TEST(Cantor, SmallValues) {
  EXPECT_EQ(cantor_pair(0, 0), 0u);
  EXPECT_EQ(cantor_pair(1, 0), 2u);
  EXPECT_EQ(cantor_pair(0, 1), 1u);
  EXPECT_EQ(cantor_pair(1, 2), 7u);
  EXPECT_EQ(cantor_unpair(7), (std::pair<std::uint64_t, std::uint64_t>{1, 2}));
}

TEST(Cantor, InverseOnAnInitialSegment) {
  for (std::uint64_t p = 0; p < 5000; ++p) {
    auto [n, m] = cantor_unpair(p);
    EXPECT_EQ(cantor_pair(n, m), p);
  }
  for (std::uint64_t n = 0; n < 100; ++n)
    for (std::uint64_t m = 0; m < 100; ++m) EXPECT_EQ(cantor_unpair(cantor_pair(n, m)), std::make_pair(n, m));
}

TEST(Cantor, LargeArguments) {
  const std::uint64_t n = 3'000'000'000ULL, m = 1'234'567'890ULL;
  EXPECT_EQ(cantor_unpair(cantor_pair(n, m)), std::make_pair(n, m));
}

TEST(Numerals, Styles) {
  EXPECT_EQ(print_term(numeral(0, NumeralStyle::Successor)), "zero");
  EXPECT_EQ(print_term(numeral(3, NumeralStyle::Successor)), "(S (S (S zero)))");
  EXPECT_EQ(print_term(numeral(4, NumeralStyle::Constants)), "num_4");
  EXPECT_EQ(print_term(numeral(0, NumeralStyle::Tprfu)), "num_0");
  EXPECT_EQ(print_term(numeral(2, NumeralStyle::Tprfu)), "(U num_0 (U num_0 num_0))");
}

TEST(Trep, SwapTable) {
  RepTables t = parse_tables("(tables (numerals 2) (fun G 1 ((0) 1) ((1) 0)))");
  auto axioms = trep_axioms(t, NumeralStyle::Constants);
  ASSERT_EQ(axioms.size(), 3u);
  Signature sig = trep_signature(t, NumeralStyle::Constants);
  EXPECT_TRUE(contains(axioms, parse_formula("(not (= num_0 num_1))", sig)));
  EXPECT_TRUE(contains(axioms, parse_formula("(= (G num_0) num_1)", sig)));
  EXPECT_TRUE(contains(axioms, parse_formula("(= (G num_1) num_0)", sig)));
}

TEST(Trep, PredicateLiterals) {
  RepTables t = parse_tables("(tables (numerals 2) (pred P 1 (pos (0)) (neg (1))))");
  Signature sig = trep_signature(t, NumeralStyle::Constants);
  auto axioms = trep_axioms(t, NumeralStyle::Constants);
  EXPECT_TRUE(contains(axioms, parse_formula("(P num_0)", sig)));
  EXPECT_TRUE(contains(axioms, parse_formula("(not (P num_1))", sig)));
}

TEST(Trep, TableStructureSatisfiesAxiomsInEveryStyle) {
  Rng rng(29);
  for (int k = 0; k < 40; ++k) {
    RepTables t = random_tables(rng);
    for (auto style : {NumeralStyle::Constants, NumeralStyle::Successor, NumeralStyle::Tprfu}) {
      FiniteStructure m = table_structure(t, style);
      for (const auto& a : trep_axioms(t, style)) EXPECT_TRUE(eval_formula(m, a)) << print_formula(a);
    }
  }
}

TEST(Trep, AxiomsAreConsistentWithExistentialClosure) {
  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    RepTables t = random_tables(rng);
    Signature sig = trep_signature(t, NumeralStyle::Constants);
    Formula all = Formula::all_of(trep_axioms(t, NumeralStyle::Constants));
    EXPECT_NE(decide(Formula::negation(all), sig).verdict, Verdict::Valid) << print_formula(all);
  }
}

TEST(Trep, ParseErrors) {
  EXPECT_THROW(parse_tables("(tables (numerals 2) (fun G 1 ((0) 2)))"), InputError);
  EXPECT_THROW(parse_tables("(tables (numerals 2) (fun G 1 ((0 1) 0)))"), InputError);
  EXPECT_THROW(parse_tables("(tables (numerals 2) (fun G 1 ((0) 1) ((0) 0)))"), InputError);
  EXPECT_THROW(parse_tables("(tables (numerals 2) (pred P 1 (pos (0)) (neg (0))))"), InputError);
  EXPECT_THROW(parse_tables("(tables (numerals 2) (fun G 1) (pred G 1))"), InputError);
  EXPECT_THROW(parse_tables("(table (numerals 2))"), InputError);
  EXPECT_THROW(table_structure(parse_tables("(tables)"), NumeralStyle::Constants), InputError);
}

TEST(RFragment, SmallBounds) {
  auto b0 = r_axioms(0);
  EXPECT_TRUE(contains(b0, parse_r("(forall x (not (lt x zero)))")));
  auto b1 = r_axioms(1);
  EXPECT_TRUE(contains(b1, parse_r("(= (add (S zero) (S zero)) (S (S zero)))")));
  EXPECT_TRUE(contains(b1, parse_r("(= (mul (S zero) zero) zero)")));
  EXPECT_TRUE(contains(b1, parse_r("(forall x (iff (lt x (S zero)) (= x zero)))")));
}

TEST(RFragment, CollapsedModelSatisfiesAxioms) {
  for (std::size_t b = 0; b <= 10; ++b) {
    FiniteStructure m = r_fragment_model(b);
    for (const auto& a : r_axioms(b)) EXPECT_TRUE(eval_formula(m, a)) << "b=" << b << " " << print_formula(a);
  }
}

TEST(RFragment, CollapseIsVisibleJustAboveTheBound) {
  // The collapsed element is below itself, so the order axiom two steps up fails.
  for (std::size_t b = 0; b <= 6; ++b) EXPECT_FALSE(eval_formula(r_fragment_model(b), r_order_axiom(b + 2)));
}
