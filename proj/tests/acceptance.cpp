// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
//
// Acceptance run: one PASS or FAIL line per criterion, exit status 1 if any
// criterion fails. Every check uses a fixed seed.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ecl/ecl.hpp"

using namespace ecl;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Check()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_seconds) {
    c.ok = false;
    c.detail += "; over the " + std::to_string(static_cast<int>(budget_seconds)) + "s budget";
  }
  if (!c.ok) ++failures;
  std::printf("%s criterion %d: %s (%s; %.2fs)\n", c.ok ? "PASS" : "FAIL", id, title, c.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string ratio(std::size_t a, std::size_t b) { return std::to_string(a) + "/" + std::to_string(b); }

Verdict verdict_of(const std::string& sig_text, const std::string& text) {
  Signature sig = parse_signature(sig_text);
  return decide(parse_formula(text, sig), sig).verdict;
}

Check resultant_oracle() {
  SuiteReport r = run_resultant_suite(500, 7);
  Check c{r.ok(), ratio(r.passed, r.total) + " agree, " + std::to_string(r.positives) + " extendable"};
  for (const auto& f : r.failures) c.detail += "; " + f;
  return c;
}

Check fixtures() {
  std::vector<std::string> bad;
  auto expect = [&](const char* name, Verdict got, Verdict want) {
    if (got != want) bad.push_back(std::string(name) + " gave " + verdict_token(got));
  };
  expect("pairing over L,R", verdict_of("(fun L 1) (fun R 1)", "(forall (x y) (exists z (and (= (L z) x) (= (R z) y))))"),
         Verdict::Valid);
  expect("surjective off the diagonal",
         verdict_of("(fun F 1)", "(forall (x y) (exists z (and (not (= z x)) (= (F z) y))))"), Verdict::Valid);
  expect("pairing over H",
         verdict_of("(fun H 2)", "(forall (x y) (exists z (and (= (H (H z z) z) x) (= (H z (H z z)) y))))"),
         Verdict::Valid);
  expect("c = d", verdict_of("(const c) (const d)", "(= c d)"), Verdict::Contingent);
  Signature c_only = parse_signature("(const c)");
  Rng rng(101);
  std::size_t contingent = 0;
  for (int k = 0; k < 50; ++k) {
    Formula f = random_sentence(rng, c_only, {1 + rng.below(3), 1 + rng.below(3), 1});
    if (decide(f, c_only).verdict == Verdict::Contingent) {
      ++contingent;
      bad.push_back("contingent over {c}: " + print_formula(f));
    }
  }
  Check c{bad.empty(), "4 fixtures, " + ratio(50 - contingent, 50) + " sentences over {c} decided"};
  for (const auto& b : bad) c.detail += "; " + b;
  return c;
}

Check ground_vs_naive() {
  SuiteReport r = run_euf_suite(300, 7);
  Check c{r.ok(), ratio(r.passed, r.total) + " agree, " + std::to_string(r.positives) + " valid"};
  for (const auto& f : r.failures) c.detail += "; " + f;
  return c;
}

Check diagram_completeness() {
  Rng rng(211);
  std::size_t decided = 0, total = 0;
  Check c;
  for (int s = 0; s < 10; ++s) {
    Signature sig = random_signature(rng);
    FiniteStructure m = random_structure(rng, sig, 1 + rng.below(3));
    Diagram d = diagram(m);
    for (int k = 0; k < 20; ++k) {
      Formula f = random_sentence(rng, d.expanded, {1 + rng.below(2), 1 + rng.below(3), 1});
      ++total;
      if (decide_with_diagram(m, f).verdict != Verdict::Contingent) {
        ++decided;
      } else if (c.ok) {
        c.ok = false;
        c.detail = "contingent: " + print_formula(f) + " over " + print_structure(m) + "; ";
      }
    }
  }
  c.detail += ratio(decided, total) + " decided by the diagram";
  return c;
}

Check binary_faithfulness() {
  Signature sig = parse_signature("(fun F 1) (const c)");
  BinaryReduction b = binary_reduction(sig);
  Rng rng(157);
  std::size_t agree = 0, valid = 0;
  Check c;
  for (int k = 0; k < 30; ++k) {
    Formula s = random_open(rng, sig, {}, rng.below(4), 2);
    bool source = decide(s, sig).verdict == Verdict::Valid;
    Formula image = Formula::implies(Formula::all_of(b.distinctness), translate(b.translation, s));
    bool target = decide(image, b.target).verdict == Verdict::Valid;
    if (source == target) {
      ++agree;
    } else {
      c.ok = false;
      c.detail += "disagree on " + print_formula(s) + "; ";
    }
    valid += source ? 1 : 0;
  }
  c.detail += ratio(agree, 30) + " agree, " + std::to_string(valid) + " valid";
  return c;
}

Check elimination_laws() {
  Rng rng(307);
  std::size_t idem = 0, star = 0;
  Check c;
  for (int k = 0; k < 200; ++k) {
    Signature sig = random_signature(rng);
    Formula f = random_sentence(rng, sig, {1 + rng.below(3), 1 + rng.below(3), 1});
    // Drop the outermost quantifier so that most cases keep a free variable.
    if (f.is_quantifier()) f = f.body();
    Formula once = eliminate(f);
    if (is_quantifier_free(once) && ground_equivalent(eliminate(once), once))
      ++idem;
    else if (c.ok)
      c = {false, "not idempotent on " + print_formula(f) + "; "};
    auto e = random_elementary(rng, sig, {"x0", "x1"}, {"y0"}, 6);
    StarResult fixed = compute_star(e);
    StarResult other = compute_star_randomized(e, rng);
    if (fixed.in_xi == other.in_xi && ground_equivalent(fixed.star_formula, other.star_formula))
      ++star;
    else if (c.ok)
      c = {false, "star depends on choices for " + print_formula(elementary_formula(e)) + "; "};
  }
  c.ok = c.ok && idem == 200 && star == 200;
  c.detail += "idempotent " + ratio(idem, 200) + ", star choice-free " + ratio(star, 200);
  return c;
}

Check representability() {
  const std::uint64_t n = 10'000;
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      if (cantor_unpair(cantor_pair(a, b)) != std::make_pair(a, b))
        return {false, "unpair fails at " + std::to_string(a) + "," + std::to_string(b)};
  // Every code below n(n+1)/2 decodes to a pair inside the square.
  for (std::uint64_t p = 0; p < n * (n + 1) / 2; ++p) {
    auto [a, b] = cantor_unpair(p);
    if (cantor_pair(a, b) != p || a >= n || b >= n) return {false, "pair misses " + std::to_string(p)};
  }
  for (std::size_t b = 0; b <= 10; ++b) {
    FiniteStructure m = r_fragment_model(b);
    for (const auto& a : r_axioms(b))
      if (!eval_formula(m, a)) return {false, "collapsed model fails " + print_formula(a)};
  }
  Rng rng(401);
  for (int k = 0; k < 20; ++k) {
    RepTables t = random_tables(rng);
    auto style = static_cast<NumeralStyle>(rng.below(3));
    FiniteStructure m = table_structure(t, style);
    auto axioms = trep_axioms(t, style);
    for (const auto& a : axioms)
      if (!eval_formula(m, a)) return {false, "table structure fails " + print_formula(a)};
    if (decide(Formula::negation(Formula::all_of(axioms)), trep_signature(t, style)).verdict == Verdict::Valid)
      return {false, "table axioms refuted"};
  }
  return {true, "pairing bijective on [0,10^4)^2, R fragment b<=10, 20 table sets"};
}

}  // namespace

int main() {
  criterion(1, "resultant matches constructive and blind extension on 500 cases", 60, resultant_oracle);
  criterion(2, "decision fixtures and no contingent sentences over {c}", 120, fixtures);
  criterion(3, "ground validity matches naive countermodel search on 300 universal sentences", 300,
            ground_vs_naive);
  criterion(4, "diagram-relative decisions are never contingent", 300, diagram_completeness);
  criterion(5, "binary reduction preserves validity on 30 sentences over {F, c}", 300, binary_faithfulness);
  criterion(6, "elimination is idempotent and star is choice-free on 200 cases", 300, elimination_laws);
  criterion(7, "pairing, R fragment and table representability", 300, representability);
  std::printf("%s %d/7\n", failures == 0 ? "PASS" : "FAIL", 7 - failures);
  return failures == 0 ? 0 : 1;
}
