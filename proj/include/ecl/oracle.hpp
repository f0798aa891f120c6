// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ecl/decide.hpp"
#include "ecl/elementary.hpp"
#include "ecl/euf.hpp"
#include "ecl/extension.hpp"
#include "ecl/random.hpp"
#include "ecl/structures.hpp"
#include "ecl/text.hpp"

// Randomized cross-checks between independent implementations. Shared by
// the command line `oracle` command and the test suites.

namespace ecl {

struct SuiteReport {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
  std::size_t positives = 0;  // cases where the checked property came out true
  std::vector<std::string> failures;

  bool ok() const { return passed == total; }
};

/// One random case of the resultant check: M, u and an elementary
/// existential description.
struct ResultantCase {
  FiniteStructure structure;
  std::vector<Element> values;
  ElementaryExistential description;
};

inline ResultantCase random_resultant_case(Rng& rng) {
  SignatureShape shape;
  shape.max_symbols = 2;
  shape.max_arity = 2;
  Signature sig = random_signature(rng, shape);
  std::vector<std::string> free_vars, bound_vars;
  std::size_t nfree = rng.below(3), nbound = 1 + rng.below(2);
  for (std::size_t i = 0; i < nfree; ++i) free_vars.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i < nbound; ++i) bound_vars.push_back("y" + std::to_string(i));
  std::size_t size = rng.below(5);
  if (size == 0 && (nfree > 0 || sig.has_constants())) size = 1;
  ResultantCase c{random_structure(rng, sig, size), {}, random_elementary(rng, sig, free_vars, bound_vars, 6)};
  for (std::size_t i = 0; i < nfree; ++i) c.values.push_back(rng.below(size));
  return c;
}

/// M satisfies the star formula at u  <=>  some extension of M satisfies the
/// elementary formula at u; the constructive and the blind search must agree.
inline SuiteReport run_resultant_suite(std::size_t cases, std::uint64_t seed, const Limits& limits = {}) {
  Rng rng(seed);
  SuiteReport r{"resultant", 0, cases, 0, {}};
  for (std::size_t k = 0; k < cases; ++k) {
    ResultantCase c = random_resultant_case(rng);
    const auto& e = c.description;
    Environment env;
    for (std::size_t i = 0; i < c.values.size(); ++i) env[e.free_vars[i]] = c.values[i];
    bool star_true = eval_formula(c.structure, compute_star(e).star_formula, env);
    auto built = constructive_extension(c.structure, c.values, e);
    auto found = blind_extension(c.structure, c.values, e, limits);
    if (star_true == built.has_value() && star_true == found.has_value()) {
      ++r.passed;
      if (star_true) ++r.positives;
    } else if (r.failures.size() < 5) {
      std::ostringstream os;
      os << "case " << k << ": star " << star_true << ", constructive " << built.has_value() << ", blind "
         << found.has_value() << "; formula " << elementary_formula(e) << "; structure " << print_structure(c.structure);
      r.failures.push_back(os.str());
    }
  }
  return r;
}

/// A random universal sentence whose matrix has at most `max_subterms`
/// distinct subterms, over a signature of arity at most 2.
inline std::pair<Formula, Signature> random_universal_case(Rng& rng, std::size_t max_subterms = 5) {
  SignatureShape shape;
  shape.max_symbols = 2;
  shape.max_arity = 2;
  Signature sig = random_signature(rng, shape);
  std::vector<std::string> vars{"x", "y"};
  for (;;) {
    std::size_t nvars = 1 + rng.below(2);
    std::vector<std::string> vs(vars.begin(), vars.begin() + nvars);
    Formula matrix = random_open(rng, sig, vs, rng.below(4), 1 + rng.below(2));
    if (subterms_of(matrix).size() > max_subterms) continue;
    auto fv = free_variables(matrix);
    return {Formula::forall(std::vector<std::string>(fv.begin(), fv.end()), matrix), sig};
  }
}

/// ground_valid on the matrix agrees with exhaustive search for small
/// countermodels.
inline SuiteReport run_euf_suite(std::size_t cases, std::uint64_t seed, const Limits& limits = {}) {
  Rng rng(seed);
  SuiteReport r{"euf", 0, cases, 0, {}};
  for (std::size_t k = 0; k < cases; ++k) {
    auto [f, sig] = random_universal_case(rng);
    auto [vars, matrix] = split_universal_prefix(f);
    bool euf = ground_valid(matrix, limits);
    bool naive = naive_universal_check(f, sig, limits);
    if (euf == naive) {
      ++r.passed;
      if (euf) ++r.positives;
    } else if (r.failures.size() < 5) {
      r.failures.push_back("case " + std::to_string(k) + ": " + print_formula(f) + " euf " + std::to_string(euf) +
                           " naive " + std::to_string(naive));
    }
  }
  return r;
}

}  // namespace ecl
