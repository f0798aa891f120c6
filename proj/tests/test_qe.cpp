// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <functional>

#include "ecl/extension.hpp"
#include "ecl/qe.hpp"
#include "ecl/random.hpp"
#include "ecl/text.hpp"

using namespace ecl;

namespace {

// All set partitions of {0..n-1} as restricted growth strings, built without
// any congruence pruning.
std::vector<Partition> all_set_partitions(std::size_t n) {
  std::vector<Partition> out;
  Partition p(n, 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t blocks) {
    if (i == n) {
      out.push_back(p);
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      p[i] = b;
      go(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0)
    out.push_back(p);
  else
    go(0, 0);
  return out;
}

// Congruence check straight from the definition: equal symbols with
// pairwise equivalent arguments must be equivalent.
bool is_congruence(const std::vector<Term>& theta, const Partition& p) {
  auto cls = [&](const Term& t) { return p[std::lower_bound(theta.begin(), theta.end(), t) - theta.begin()]; };
  for (std::size_t i = 0; i < theta.size(); ++i)
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const Term &s = theta[i], &t = theta[j];
      if (!s.is_app() || !t.is_app() || s.name() != t.name() || s.arity() != t.arity()) continue;
      bool same = true;
      for (std::size_t k = 0; k < s.arity(); ++k) same = same && cls(s.args()[k]) == cls(t.args()[k]);
      if (same && p[i] != p[j]) return false;
    }
  return true;
}

std::size_t brute_congruences(const std::vector<Term>& theta) {
  std::size_t n = 0;
  for (const auto& p : all_set_partitions(theta.size())) n += is_congruence(theta, p) ? 1 : 0;
  return n;
}

ElementaryExistential make(const std::vector<Term>& seeds, std::vector<std::string> free_vars,
                           std::vector<std::string> bound_vars, const std::vector<std::vector<Term>>& blocks) {
  ElementaryExistential e;
  e.theta = subterm_closure(seeds);
  e.free_vars = std::move(free_vars);
  e.bound_vars = std::move(bound_vars);
  e.classes.assign(e.theta.size(), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (const auto& t : blocks[b]) e.classes[*e.index_of(t)] = b;
  e.classes = canonical_partition(e.classes);
  validate(e);
  return e;
}

// Does some one-point-or-more extension of m (new elements appended) satisfy
// exists y. psi at u? Enumerates every completion of the new cells; only
// meant for unary signatures and a handful of new elements.
bool extendable_by_enumeration(const FiniteStructure& m, const Formula& exists_psi, const Environment& env,
                               std::size_t max_new) {
  const Signature& sig = m.signature();
  for (std::size_t k = 0; k <= max_new; ++k) {
    const std::size_t n = m.size() + k;
    if (n == 0) {
      if (eval_formula(m, exists_psi, env)) return true;
      continue;
    }
    struct Cell {
      std::string symbol;
      bool function;
      std::size_t index;
    };
    std::vector<Cell> cells;
    FiniteStructure base(sig, n);
    for (const auto& [name, info] : sig.symbols()) {
      if (info.arity != 1) throw std::logic_error("unary signatures only");
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (info.kind == SymbolKind::Function)
          base.mutable_function_table(name)[i] = m.function_table(name)[i];
        else
          base.mutable_relation_table(name)[i] = m.relation_table(name)[i];
      }
      for (std::size_t i = m.size(); i < n; ++i) cells.push_back({name, info.kind == SymbolKind::Function, i});
    }
    std::function<bool(std::size_t)> go = [&](std::size_t c) {
      if (c == cells.size()) return eval_formula(base, exists_psi, env);
      const Cell& cell = cells[c];
      std::size_t range = cell.function ? n : 2;
      for (std::size_t v = 0; v < range; ++v) {
        if (cell.function)
          base.mutable_function_table(cell.symbol)[cell.index] = v;
        else
          base.mutable_relation_table(cell.symbol)[cell.index] = static_cast<char>(v);
        if (go(c + 1)) return true;
      }
      return false;
    };
    if (go(0)) return true;
  }
  return false;
}

}  // namespace

TEST(Congruences, MatchBruteForceCounts) {
  Signature sig = parse_signature("(fun F 1)");
  auto theta3 = subterm_closure({parse_term("x", sig), parse_term("y", sig), parse_term("(F x)", sig)});
  EXPECT_EQ(enumerate_congruences(theta3).size(), 5u);
  EXPECT_EQ(brute_congruences(theta3), 5u);
  auto theta4 = subterm_closure({parse_term("(F x)", sig), parse_term("(F y)", sig)});
  EXPECT_EQ(all_set_partitions(4).size(), 15u);
  EXPECT_EQ(brute_congruences(theta4), 12u);
  EXPECT_EQ(enumerate_congruences(theta4).size(), 12u);
  EXPECT_EQ(enumerate_congruences(subterm_closure({Term::var("x")})).size(), 1u);
}

TEST(Congruences, RandomTermSetsAgreeWithBruteForce) {
  Rng rng(17);
  Signature sig = parse_signature("(fun F 1) (fun G 2) (const c)");
  for (int k = 0; k < 40; ++k) {
    std::vector<Term> seeds{random_term(rng, sig, {"x", "y"}, 2), random_term(rng, sig, {"x", "y"}, 2)};
    auto theta = subterm_closure(seeds);
    if (theta.size() > 7) continue;
    auto ps = enumerate_congruences(theta);
    EXPECT_EQ(ps.size(), brute_congruences(theta));
    for (const auto& p : ps) EXPECT_TRUE(is_congruence(theta, p));
  }
}

TEST(Congruences, ResourceCap) {
  Signature sig = parse_signature("(fun F 1)");
  Limits tight;
  tight.max_theta = 3;
  auto theta = subterm_closure({parse_term("(F (F (F x)))", sig)});
  EXPECT_THROW(enumerate_congruences(theta, tight), ResourceLimit);
  tight = {};
  tight.max_partitions = 3;
  auto wide = subterm_closure({parse_term("x", sig), parse_term("y", sig), parse_term("z", sig)});
  EXPECT_THROW(enumerate_congruences(wide, tight), ResourceLimit);
}

TEST(Decomposition, PairingConstraint) {
  Signature sig = parse_signature("(fun L 1) (fun R 1)");
  Formula psi = parse_formula("(and (= (L z) x) (= (R z) y))", sig);
  auto ds = elementary_decomposition(psi, {"x", "y"}, {"z"});
  // Brute force: partitions of the five terms where L(z)~x and R(z)~y.
  auto theta = subterm_closure({parse_term("(L z)", sig), parse_term("(R z)", sig), Term::var("x"), Term::var("y")});
  auto idx = [&](const char* t) {
    return std::lower_bound(theta.begin(), theta.end(), parse_term(t, sig)) - theta.begin();
  };
  std::size_t expected = 0;
  for (const auto& p : all_set_partitions(theta.size()))
    if (is_congruence(theta, p) && p[idx("(L z)")] == p[idx("x")] && p[idx("(R z)")] == p[idx("y")]) ++expected;
  EXPECT_EQ(ds.size(), expected);
  bool merged = false, apart = false;
  for (const auto& e : ds) {
    ASSERT_EQ(e.theta, theta);
    EXPECT_EQ(e.classes[idx("(L z)")], e.classes[idx("x")]);
    EXPECT_EQ(e.classes[idx("(R z)")], e.classes[idx("y")]);
    (e.classes[idx("x")] == e.classes[idx("y")] ? merged : apart) = true;
  }
  EXPECT_TRUE(merged);
  EXPECT_TRUE(apart);
}

TEST(Decomposition, TrivialCases) {
  EXPECT_TRUE(elementary_decomposition(Formula::falsity(), {}, {"y"}).empty());
  auto ds = elementary_decomposition(Formula::equal(Term::var("x"), Term::var("x")), {"x"}, {});
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_TRUE(ds[0].epsilon.empty());
}

TEST(Decomposition, DisjunctionIsEquivalentToInput) {
  Rng rng(23);
  Signature sig = parse_signature("(fun F 1) (rel P 1) (const c)");
  for (int k = 0; k < 60; ++k) {
    Formula psi = random_open(rng, sig, {"x", "y"}, 1 + rng.below(3), 1);
    auto ds = elementary_decomposition(psi, {"x"}, {"y"});
    std::vector<Formula> parts;
    for (const auto& e : ds) parts.push_back(theta_formula(e));
    EXPECT_TRUE(ground_equivalent(Formula::any_of(parts), psi)) << print_formula(psi);
  }
}

TEST(Star, SingleFreeClass) {
  Signature sig = parse_signature("(fun F 1)");
  Term x0 = Term::var("x0"), y0 = Term::var("y0"), fy = parse_term("(F y0)", sig);
  auto e = make({x0, fy}, {"x0"}, {"y0"}, {{x0, fy}, {y0}});
  StarResult s = compute_star(e);
  auto xi = s.xi();
  ASSERT_EQ(xi.size(), 2u);
  EXPECT_EQ(e.theta[xi[0]], x0);
  EXPECT_EQ(e.theta[xi[1]], fy);
  EXPECT_EQ(*s.star[xi[1]], x0);
  EXPECT_FALSE(s.in_xi[*e.index_of(y0)]);
  EXPECT_TRUE(ground_valid(s.star_formula));
}

TEST(Star, TrivialTermSet) {
  auto e = make({Term::var("x0")}, {"x0"}, {}, {{Term::var("x0")}});
  StarResult s = compute_star(e);
  EXPECT_EQ(s.xi().size(), 1u);
  EXPECT_TRUE(ground_valid(s.star_formula));
}

TEST(Star, PairingSiblings) {
  Signature sig = parse_signature("(fun L 1) (fun R 1)");
  Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
  Term lz = parse_term("(L z)", sig), rz = parse_term("(R z)", sig);
  auto apart = make({x, y, lz, rz}, {"x", "y"}, {"z"}, {{x, lz}, {y, rz}, {z}});
  EXPECT_TRUE(ground_equivalent(compute_star(apart).star_formula, Formula::not_equal(x, y)));
  auto merged = make({x, y, lz, rz}, {"x", "y"}, {"z"}, {{x, y, lz, rz}, {z}});
  EXPECT_TRUE(ground_equivalent(compute_star(merged).star_formula, Formula::equal(x, y)));
}

TEST(Star, ChoiceDoesNotMatter) {
  Rng rng(31);
  for (int k = 0; k < 200; ++k) {
    SignatureShape shape;
    Signature sig = random_signature(rng, shape);
    auto e = random_elementary(rng, sig, {"x0", "x1"}, {"y0"}, 6);
    validate(e);
    StarResult fixed = compute_star(e);
    StarResult other = compute_star_randomized(e, rng);
    EXPECT_EQ(fixed.in_xi, other.in_xi);
    EXPECT_TRUE(ground_equivalent(fixed.star_formula, other.star_formula)) << print_formula(elementary_formula(e));
  }
}

TEST(Star, FreeVariablesOfStarFormula) {
  Rng rng(37);
  for (int k = 0; k < 200; ++k) {
    Signature sig = random_signature(rng);
    auto e = random_elementary(rng, sig, {"x0", "x1"}, {"y0", "y1"}, 6);
    StarResult s = compute_star(e);
    for (const auto& v : free_variables(s.star_formula)) EXPECT_TRUE(e.is_free(v)) << v;
    for (std::size_t i = 0; i < e.theta.size(); ++i) {
      EXPECT_EQ(s.in_xi[i], s.star[i].has_value());
      if (e.theta[i].is_var() && e.is_free(e.theta[i].name())) {
        EXPECT_EQ(*s.star[i], e.theta[i]);
      }
    }
  }
}

TEST(Resultant, ExtensionsAgreeWithStarFormula) {
  Rng rng(41);
  for (int k = 0; k < 300; ++k) {
    SignatureShape shape;
    Signature sig = random_signature(rng, shape);
    std::size_t size = rng.below(4);
    if (size == 0 && sig.has_constants()) size = 1;
    FiniteStructure m = random_structure(rng, sig, size);
    std::vector<std::string> free_vars = size == 0 ? std::vector<std::string>{} : std::vector<std::string>{"x0"};
    auto e = random_elementary(rng, sig, free_vars, {"y0"}, 6);
    std::vector<Element> u;
    for (std::size_t i = 0; i < free_vars.size(); ++i) u.push_back(rng.below(size));
    Environment env;
    for (std::size_t i = 0; i < u.size(); ++i) env[free_vars[i]] = u[i];
    bool star = eval_formula(m, compute_star(e).star_formula, env);
    auto built = constructive_extension(m, u, e);
    auto found = blind_extension(m, u, e);
    EXPECT_EQ(star, built.has_value());
    EXPECT_EQ(star, found.has_value());
    for (const auto* w : {&built, &found}) {
      if (!w->has_value()) continue;
      EXPECT_TRUE((*w)->structure.extends(m));
      Environment full = (*w)->assignment;
      EXPECT_TRUE(eval_formula((*w)->structure, theta_formula(e), full));
    }
  }
}

TEST(Eliminate, OneStepExamples) {
  Signature lr = parse_signature("(fun L 1) (fun R 1)");
  Signature f = parse_signature("(fun F 1)");
  Formula pair = eliminate_one(parse_formula("(and (= (L z) x) (= (R z) y))", lr), {"x", "y"}, "z");
  EXPECT_TRUE(ground_valid(pair));
  EXPECT_EQ(eliminate_one(parse_formula("(= (F x) x)", f), {}, "x").kind(), FormulaKind::True);
  EXPECT_EQ(eliminate_one(parse_formula("(not (= y y))", f), {}, "y").kind(), FormulaKind::False);
}

TEST(Eliminate, SentenceExamples) {
  Signature f = parse_signature("(fun F 1)");
  EXPECT_EQ(eliminate(parse_formula("(forall x (exists z (and (not (= z x)) (= (F z) x))))", f)).kind(),
            FormulaKind::True);
  EXPECT_EQ(eliminate(parse_formula("(exists x (not (= x x)))", f)).kind(), FormulaKind::False);
  Formula open = parse_formula("(= (F x) y)", f);
  // Unchanged up to the orientation of the equation.
  Formula same = eliminate(open);
  EXPECT_EQ(same.kind(), FormulaKind::Equal);
  EXPECT_TRUE(ground_equivalent(same, open));
}

TEST(Eliminate, EmptyStructureNeedsWitness) {
  // exists y. true is true in every e.c. structure but false in the empty
  // structure, which has a nonempty extension.
  Signature p = parse_signature("(rel P 1)");
  EXPECT_EQ(eliminate(parse_formula("(exists x (P x))", p)).kind(), FormulaKind::True);
  EXPECT_EQ(eliminate(parse_formula("(exists x (and (P x) (not (P x))))", p)).kind(), FormulaKind::False);
}

// Soundness of one elimination step, checked two ways: against the
// decomposition's extension witnesses, and against brute-force enumeration
// of small extensions of M.
TEST(Eliminate, PerStepSoundness) {
  Rng rng(43);
  Signature sig = parse_signature("(fun F 1) (rel P 1)");
  std::size_t positives = 0, total = 0;
  for (int k = 0; k < 150; ++k) {
    Formula psi = random_open(rng, sig, {"x", "y"}, rng.below(3), 1);
    Formula out = eliminate_one(psi, {"x"}, "y");
    EXPECT_TRUE(is_quantifier_free(out));
    for (const auto& v : free_variables(out)) EXPECT_EQ(v, "x");
    auto ds = elementary_decomposition(psi, {"x"}, {"y"});
    for (int j = 0; j < 3; ++j) {
      std::size_t size = 1 + rng.below(2);
      FiniteStructure m = random_structure(rng, sig, size);
      Element a = rng.below(size);
      Environment env{{"x", a}};
      bool claimed = eval_formula(m, out, env);
      bool witnessed = false;
      for (const auto& e : ds) {
        std::vector<Element> u;
        for (const auto& v : e.free_vars) u.push_back(env.at(v));
        if (blind_extension(m, u, e)) {
          witnessed = true;
          break;
        }
      }
      bool enumerated = extendable_by_enumeration(m, Formula::exists("y", psi), env, 2);
      EXPECT_EQ(claimed, witnessed) << print_formula(psi) << " at x=" << a << "\n" << print_structure(m);
      EXPECT_EQ(claimed, enumerated) << print_formula(psi) << " at x=" << a << "\n" << print_structure(m);
      positives += claimed ? 1 : 0;
      ++total;
    }
  }
  // Both outcomes must be exercised for the check to mean anything.
  EXPECT_GT(positives, total / 10);
  EXPECT_LT(positives, total);
}

TEST(Eliminate, Idempotent) {
  Rng rng(47);
  for (int k = 0; k < 100; ++k) {
    Signature sig = random_signature(rng);
    Formula f = random_sentence(rng, sig, {2, 2, 1});
    Formula once = eliminate(f);
    EXPECT_TRUE(is_quantifier_free(once));
    EXPECT_TRUE(ground_equivalent(eliminate(once), once)) << print_formula(f);
  }
}

TEST(Eliminate, SignatureRestrictionDoesNotChangeResult) {
  Rng rng(53);
  Signature wide = parse_signature("(fun F 1) (fun G 2) (rel P 1) (const c)");
  for (int k = 0; k < 50; ++k) {
    Formula f = random_sentence(rng, wide, {2, 2, 1});
    Signature narrow = wide.restricted_to(symbols_of(f));
    EXPECT_NO_THROW(check_formula(f, narrow));
    EXPECT_TRUE(ground_equivalent(eliminate(f), eliminate(parse_formula(print_formula(f), narrow))));
  }
}

TEST(Simplify, Examples) {
  Signature sig = parse_signature("(fun F 1) (const c)");
  EXPECT_EQ(simplify_open(parse_formula("(or (= x y) (not (= x y)))", sig)).kind(), FormulaKind::True);
  Formula once = simplify_open(parse_formula("(and (= (F c) c) (= (F c) c))", sig));
  EXPECT_EQ(once.kind(), FormulaKind::Equal);
  EXPECT_TRUE(ground_equivalent(once, parse_formula("(= (F c) c)", sig)));
  EXPECT_EQ(simplify_open(parse_formula("(and (= x y) (not (= (F x) (F y))))", sig)).kind(), FormulaKind::False);
}

TEST(Simplify, PreservesMeaning) {
  Rng rng(59);
  Signature sig = parse_signature("(fun F 1) (rel P 1) (const c)");
  for (int k = 0; k < 100; ++k) {
    Formula f = random_open(rng, sig, {"x", "y"}, 1 + rng.below(4), 1);
    Formula g = simplify_open(f);
    EXPECT_TRUE(ground_equivalent(f, g));
    for (int j = 0; j < 3; ++j) {
      FiniteStructure m = random_structure(rng, sig, 1 + rng.below(3));
      Environment env{{"x", rng.below(m.size())}, {"y", rng.below(m.size())}};
      EXPECT_EQ(eval_formula(m, f, env), eval_formula(m, g, env));
    }
  }
}
