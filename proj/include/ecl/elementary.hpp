// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecl/errors.hpp"
#include "ecl/syntax.hpp"

namespace ecl {

/// Class index of each term in a partition, normalized so that classes are
/// numbered in order of first occurrence.
using Partition = std::vector<std::size_t>;

/// A relation literal position: relation symbol applied to a tuple of
/// indices into the term set.
struct RelationKey {
  std::string relation;
  std::vector<std::size_t> args;

  friend auto operator<=>(const RelationKey&, const RelationKey&) = default;
};

/// A complete description of a subterm-closed term set: which terms are
/// equal (the partition) and which relation instances hold (epsilon).
///
/// Epsilon may be partial: only the listed instances are constrained. A
/// partial description is the disjunction of all its total completions, and
/// every operation below is exact for it.
struct ElementaryExistential {
  std::vector<Term> theta;  // subterm-closed, in term order
  std::vector<std::string> free_vars;
  std::vector<std::string> bound_vars;
  Partition classes;
  std::map<RelationKey, bool> epsilon;

  std::size_t class_count() const {
    return classes.empty() ? 0 : *std::max_element(classes.begin(), classes.end()) + 1;
  }

  std::optional<std::size_t> index_of(const Term& t) const {
    auto it = std::lower_bound(theta.begin(), theta.end(), t);
    if (it == theta.end() || !(*it == t)) return std::nullopt;
    return static_cast<std::size_t>(it - theta.begin());
  }

  bool is_free(const std::string& v) const {
    return std::find(free_vars.begin(), free_vars.end(), v) != free_vars.end();
  }
};

/// Renumbers class ids in order of first occurrence.
inline Partition canonical_partition(const Partition& p) {
  std::map<std::size_t, std::size_t> remap;
  Partition out;
  out.reserve(p.size());
  for (std::size_t c : p) {
    auto [it, inserted] = remap.emplace(c, remap.size());
    out.push_back(it->second);
  }
  return out;
}

namespace detail {

/// Index of each argument of each term of a subterm-closed, term-ordered set.
inline std::vector<std::vector<std::size_t>> argument_indices(const std::vector<Term>& theta) {
  std::vector<std::vector<std::size_t>> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    for (const auto& a : theta[i].args()) {
      auto it = std::lower_bound(theta.begin(), theta.end(), a);
      if (it == theta.end() || !(*it == a)) throw InputError("term set is not closed under subterms");
      out[i].push_back(static_cast<std::size_t>(it - theta.begin()));
    }
  }
  return out;
}

}  // namespace detail

/// Pairwise constraints used to prune partition enumeration: `equal` pairs
/// must share a class and the others must not.
struct PartitionConstraint {
  std::size_t a;
  std::size_t b;
  bool equal;
};

/// Calls `visit` on every partition of `theta` that is a congruence for the
/// function applications inside `theta` and satisfies `constraints`.
/// `theta` must be subterm-closed and sorted in term order. Stops early when
/// `visit` returns false.
inline void for_each_congruence(const std::vector<Term>& theta, const std::vector<PartitionConstraint>& constraints,
                                const std::function<bool(const Partition&)>& visit, const Limits& limits = {}) {
  if (!std::is_sorted(theta.begin(), theta.end())) throw InputError("term set must be in term order");
  if (theta.size() > limits.max_theta)
    throw ResourceLimit("term set of size " + std::to_string(theta.size()) + " exceeds max-theta " +
                        std::to_string(limits.max_theta));
  const auto args = detail::argument_indices(theta);
  const std::size_t n = theta.size();
  // Constraints are checked when the later of their two terms is placed.
  std::vector<std::vector<PartitionConstraint>> due(n);
  for (const auto& c : constraints) {
    if (c.a >= n || c.b >= n) throw InputError("constraint index out of range");
    due[std::max(c.a, c.b)].push_back(c);
  }
  Partition cls(n, 0);
  std::size_t emitted = 0;
  bool stop = false;

  std::function<void(std::size_t, std::size_t)> place = [&](std::size_t i, std::size_t used) {
    if (stop) return;
    if (i == n) {
      if (++emitted > limits.max_partitions)
        throw ResourceLimit("partition enumeration exceeded max-partitions " + std::to_string(limits.max_partitions));
      if (!visit(cls)) stop = true;
      return;
    }
    std::optional<std::size_t> forced;
    const Term& t = theta[i];
    if (t.is_app()) {
      for (std::size_t j = 0; j < i && !forced; ++j) {
        const Term& s = theta[j];
        if (!s.is_app() || s.name() != t.name() || s.arity() != t.arity()) continue;
        bool congruent = true;
        for (std::size_t k = 0; k < t.arity() && congruent; ++k) congruent = cls[args[i][k]] == cls[args[j][k]];
        if (congruent) forced = cls[j];
      }
    }
    auto ok = [&](std::size_t c) {
      for (const auto& con : due[i]) {
        std::size_t other = con.a == i ? con.b : con.a;
        std::size_t oc = other == i ? c : cls[other];
        if ((oc == c) != con.equal) return false;
      }
      return true;
    };
    if (forced) {
      if (ok(*forced)) {
        cls[i] = *forced;
        place(i + 1, used);
      }
      return;
    }
    for (std::size_t c = 0; c <= used && !stop; ++c) {
      if (!ok(c)) continue;
      cls[i] = c;
      place(i + 1, c == used ? used + 1 : used);
    }
  };
  place(0, 0);
}

/// All congruence partitions of a subterm-closed term set, in the
/// deterministic order of restricted growth strings.
inline std::vector<Partition> enumerate_congruences(const std::vector<Term>& theta, const Limits& limits = {}) {
  std::vector<Partition> out;
  for_each_congruence(
      theta, {},
      [&](const Partition& p) {
        out.push_back(p);
        return true;
      },
      limits);
  return out;
}

/// Checks the structural invariants of an elementary existential formula.
inline void validate(const ElementaryExistential& e) {
  if (!std::is_sorted(e.theta.begin(), e.theta.end()) ||
      std::adjacent_find(e.theta.begin(), e.theta.end()) != e.theta.end())
    throw InputError("term set must be sorted and duplicate-free");
  if (subterm_closure(e.theta).size() != e.theta.size()) throw InputError("term set is not closed under subterms");
  if (e.classes.size() != e.theta.size()) throw InputError("partition size does not match the term set");
  std::set<std::string> allowed(e.free_vars.begin(), e.free_vars.end());
  allowed.insert(e.bound_vars.begin(), e.bound_vars.end());
  for (const auto& t : e.theta)
    for (const auto& v : variables(t))
      if (!allowed.count(v)) throw InputError("variable '" + v + "' is neither free nor bound");
  const auto args = detail::argument_indices(e.theta);
  for (std::size_t i = 0; i < e.theta.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Term &t = e.theta[i], &s = e.theta[j];
      if (!t.is_app() || !s.is_app() || t.name() != s.name() || t.arity() != s.arity()) continue;
      bool congruent = true;
      for (std::size_t k = 0; k < t.arity(); ++k) congruent = congruent && e.classes[args[i][k]] == e.classes[args[j][k]];
      if (congruent && e.classes[i] != e.classes[j])
        throw InputError("partition is not a congruence: " + std::to_string(i) + " vs " + std::to_string(j));
    }
  }
  std::map<std::pair<std::string, std::vector<std::size_t>>, bool> by_class;
  for (const auto& [key, bit] : e.epsilon) {
    std::vector<std::size_t> cls;
    for (std::size_t a : key.args) {
      if (a >= e.theta.size()) throw InputError("epsilon refers to a term outside the term set");
      cls.push_back(e.classes[a]);
    }
    auto [it, inserted] = by_class.emplace(std::make_pair(key.relation, cls), bit);
    if (!inserted && it->second != bit) throw InputError("epsilon does not respect the partition");
  }
}

/// The quantifier-free matrix: all equalities and disequalities between
/// terms of theta dictated by the partition, plus the epsilon literals.
inline Formula theta_formula(const ElementaryExistential& e) {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < e.theta.size(); ++i)
    for (std::size_t j = i + 1; j < e.theta.size(); ++j)
      parts.push_back(e.classes[i] == e.classes[j] ? Formula::equal(e.theta[i], e.theta[j])
                                                   : Formula::not_equal(e.theta[i], e.theta[j]));
  for (const auto& [key, bit] : e.epsilon) {
    std::vector<Term> args;
    for (std::size_t a : key.args) args.push_back(e.theta[a]);
    Formula atom = Formula::atom(key.relation, std::move(args));
    parts.push_back(bit ? atom : Formula::negation(atom));
  }
  return Formula::all_of(std::move(parts));
}

inline Formula elementary_formula(const ElementaryExistential& e) {
  return Formula::exists(e.bound_vars, theta_formula(e));
}

/// The reachable subset Xi of theta, a closed-in-free-variables term for
/// each member, and the resulting quantifier-free formula.
struct StarResult {
  std::vector<bool> in_xi;          // indexed like theta
  std::vector<std::optional<Term>> star;  // defined exactly on Xi
  Formula star_formula = Formula::truth();

  std::vector<std::size_t> xi() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < in_xi.size(); ++i)
      if (in_xi[i]) out.push_back(i);
    return out;
  }
};

namespace detail {

inline Formula assemble_star_formula(const ElementaryExistential& e, const std::vector<std::optional<Term>>& star) {
  const auto args = argument_indices(e.theta);
  std::vector<Formula> parts;
  std::set<Formula> seen;
  auto add = [&](Formula f) {
    if (seen.insert(f).second) parts.push_back(std::move(f));
  };
  bool contradictory = false;
  const std::size_t n = e.theta.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!star[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!star[j]) continue;
      const Term &a = *star[i], &b = *star[j];
      if (e.classes[i] == e.classes[j]) {
        if (!(a == b)) add(Formula::equal(std::min(a, b), std::max(a, b)));
      } else {
        if (a == b) contradictory = true;
        add(Formula::not_equal(std::min(a, b), std::max(a, b)));
      }
    }
  }
  for (const auto& [key, bit] : e.epsilon) {
    std::vector<Term> targs;
    bool inside = true;
    for (std::size_t a : key.args) {
      if (!star[a]) {
        inside = false;
        break;
      }
      targs.push_back(*star[a]);
    }
    if (!inside) continue;
    Formula atom = Formula::atom(key.relation, std::move(targs));
    add(bit ? atom : Formula::negation(atom));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Term& t = e.theta[i];
    if (!star[i] || !t.is_app()) continue;
    std::vector<Term> targs;
    bool inside = true;
    for (std::size_t a : args[i]) {
      if (!star[a]) {
        inside = false;
        break;
      }
      targs.push_back(*star[a]);
    }
    if (!inside) continue;
    Term rebuilt = Term::app(t.name(), std::move(targs));
    if (!(rebuilt == *star[i])) add(Formula::equal(std::min(rebuilt, *star[i]), std::max(rebuilt, *star[i])));
  }
  if (contradictory) return Formula::falsity();
  return Formula::all_of(std::move(parts));
}

}  // namespace detail

/// Least fixpoint of: free variables are reachable and denote themselves;
/// a term congruent to a reachable one is reachable; an application whose
/// arguments are reachable is reachable. Each class takes one star term: its
/// least free variable if it has one, otherwise the application found first
/// by a term-ordered scan; every member of the class shares it.
inline StarResult compute_star(const ElementaryExistential& e) {
  const std::size_t n = e.theta.size();
  const auto args = detail::argument_indices(e.theta);
  std::map<std::size_t, Term> class_star;
  for (std::size_t i = 0; i < n; ++i) {
    const Term& t = e.theta[i];
    if (t.is_var() && e.is_free(t.name()) && !class_star.count(e.classes[i])) class_star.emplace(e.classes[i], t);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Term& t = e.theta[i];
      if (!t.is_app() || class_star.count(e.classes[i])) continue;
      std::vector<Term> targs;
      bool ready = true;
      for (std::size_t a : args[i]) {
        auto it = class_star.find(e.classes[a]);
        if (it == class_star.end()) {
          ready = false;
          break;
        }
        targs.push_back(it->second);
      }
      if (!ready) continue;
      class_star.emplace(e.classes[i], Term::app(t.name(), std::move(targs)));
      changed = true;
      break;
    }
  }
  StarResult r;
  r.in_xi.assign(n, false);
  r.star.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = class_star.find(e.classes[i]);
    if (it == class_star.end()) continue;
    r.in_xi[i] = true;
    const Term& t = e.theta[i];
    r.star[i] = (t.is_var() && e.is_free(t.name())) ? t : it->second;
  }
  r.star_formula = detail::assemble_star_formula(e, r.star);
  return r;
}

/// Same fixpoint, but each term's star is picked uniformly among all rule
/// applications available at that point (any reachable congruent term, or
/// the application rule). Used to check that the choice does not matter.
template <typename Rng>
StarResult compute_star_randomized(const ElementaryExistential& e, Rng& rng) {
  const std::size_t n = e.theta.size();
  const auto args = detail::argument_indices(e.theta);
  std::vector<std::optional<Term>> star(n);
  for (std::size_t i = 0; i < n; ++i)
    if (e.theta[i].is_var() && e.is_free(e.theta[i].name())) star[i] = e.theta[i];
  for (;;) {
    std::vector<std::pair<std::size_t, Term>> options;
    for (std::size_t i = 0; i < n; ++i) {
      if (star[i]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (star[j] && e.classes[j] == e.classes[i]) options.emplace_back(i, *star[j]);
      const Term& t = e.theta[i];
      if (!t.is_app()) continue;
      std::vector<Term> targs;
      bool ready = true;
      for (std::size_t a : args[i]) {
        if (!star[a]) {
          ready = false;
          break;
        }
        targs.push_back(*star[a]);
      }
      if (ready) options.emplace_back(i, Term::app(t.name(), std::move(targs)));
    }
    if (options.empty()) break;
    auto& pick = options[static_cast<std::size_t>(rng() % options.size())];
    star[pick.first] = pick.second;
  }
  StarResult r;
  r.in_xi.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) r.in_xi[i] = star[i].has_value();
  r.star = star;
  r.star_formula = detail::assemble_star_formula(e, star);
  return r;
}

}  // namespace ecl
