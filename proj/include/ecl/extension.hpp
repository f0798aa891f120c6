// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecl/elementary.hpp"
#include "ecl/errors.hpp"
#include "ecl/structures.hpp"

namespace ecl {

/// An extension N of M together with values for the bound variables that
/// make the matrix true in N.
struct ExtensionWitness {
  FiniteStructure structure;
  Environment assignment;  // free and bound variables
};

enum class ExtensionMethod { Constructive, Blind };

namespace detail {

inline Environment free_assignment(const ElementaryExistential& e, const FiniteStructure& m,
                                   const std::vector<Element>& u) {
  if (u.size() != e.free_vars.size())
    throw InputError("expected " + std::to_string(e.free_vars.size()) + " free values, got " +
                     std::to_string(u.size()));
  Environment env;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= m.size()) throw InputError("free value outside the domain");
    env[e.free_vars[i]] = u[i];
  }
  return env;
}

inline void check_symbols(const ElementaryExistential& e, const FiniteStructure& m) {
  for (const auto& t : e.theta)
    if (t.is_app()) {
      auto info = m.signature().lookup(t.name());
      if (!info || info->kind != SymbolKind::Function || info->arity != t.arity())
        throw InputError("structure does not interpret function '" + t.name() + "'");
    }
  for (const auto& [key, bit] : e.epsilon) {
    auto info = m.signature().lookup(key.relation);
    if (!info || info->kind != SymbolKind::Relation || info->arity != key.args.size())
      throw InputError("structure does not interpret relation '" + key.relation + "'");
  }
}

inline std::vector<std::string> bound_outside_theta(const ElementaryExistential& e) {
  std::vector<std::string> out;
  for (const auto& y : e.bound_vars)
    if (!e.index_of(Term::var(y))) out.push_back(y);
  return out;
}

// Copies M into a structure of size n (n >= |M|); new cells get `fill`.
inline FiniteStructure enlarge(const FiniteStructure& m, std::size_t n, Element fill) {
  FiniteStructure out(m.signature(), n);
  for (const auto& [name, info] : m.signature().symbols()) {
    if (info.kind == SymbolKind::Function) {
      auto& table = out.mutable_function_table(name);
      for (auto& v : table) v = fill;
    }
    for (std::size_t idx = 0; idx < m.table_size(info.arity); ++idx) {
      auto tuple = m.tuple_at(idx, info.arity);
      if (info.kind == SymbolKind::Function)
        out.set_function(name, tuple, m.apply(name, tuple));
      else
        out.set_relation(name, tuple, m.holds(name, tuple));
    }
  }
  return out;
}

inline void certify(const ElementaryExistential& e, const FiniteStructure& m, const ExtensionWitness& w) {
  if (!w.structure.extends(m)) throw InvariantViolation("witness structure does not extend the input structure");
  if (!eval_formula(w.structure, theta_formula(e), w.assignment))
    throw InvariantViolation("witness assignment does not satisfy the elementary formula");
}

}  // namespace detail

/// The construction from the resultant: when M satisfies the star formula at
/// u, adjoin one new element per class outside Xi and read the tables off
/// theta. Unconstrained new cells point at the first new class (or element 0).
inline std::optional<ExtensionWitness> constructive_extension(const FiniteStructure& m, const std::vector<Element>& u,
                                                              const ElementaryExistential& e) {
  validate(e);
  detail::check_symbols(e, m);
  Environment env = detail::free_assignment(e, m, u);
  StarResult star = compute_star(e);
  if (!eval_formula(m, star.star_formula, env)) return std::nullopt;

  const std::size_t n = e.theta.size();
  std::vector<Element> value(n);
  std::map<std::size_t, Element> fresh_of_class;
  std::size_t size = m.size();
  std::optional<Element> first_new;
  for (std::size_t i = 0; i < n; ++i) {
    if (star.in_xi[i]) {
      value[i] = eval_term(m, *star.star[i], env);
      continue;
    }
    auto [it, inserted] = fresh_of_class.emplace(e.classes[i], size);
    if (inserted) ++size;
    value[i] = it->second;
    if (!first_new) first_new = it->second;
  }
  auto loose = detail::bound_outside_theta(e);
  if (!loose.empty() && size == 0) {
    first_new = 0;
    size = 1;
  }
  Element fill = first_new.value_or(0);
  ExtensionWitness w{size == m.size() ? m : detail::enlarge(m, size, fill), env};

  for (std::size_t i = 0; i < n; ++i) {
    const Term& t = e.theta[i];
    if (t.is_var()) {
      if (!e.is_free(t.name())) w.assignment[t.name()] = value[i];
      continue;
    }
    std::vector<Element> args;
    bool touches_new = false;
    for (const auto& a : t.args()) {
      args.push_back(value[*e.index_of(a)]);
      touches_new = touches_new || args.back() >= m.size();
    }
    if (touches_new) w.structure.set_function(t.name(), args, value[i]);
  }
  for (const auto& [key, bit] : e.epsilon) {
    std::vector<Element> args;
    bool touches_new = false;
    for (std::size_t a : key.args) {
      args.push_back(value[a]);
      touches_new = touches_new || args.back() >= m.size();
    }
    if (touches_new) w.structure.set_relation(key.relation, args, bit);
  }
  for (const auto& y : loose) w.assignment[y] = fill;
  detail::certify(e, m, w);
  return w;
}

namespace detail {

// Depth-first search over values of theta in term order. Elements beyond
// |M| are introduced in increasing order, which loses no generality since
// they are interchangeable.
class BlindSearch {
 public:
  BlindSearch(const FiniteStructure& m, const ElementaryExistential& e, Environment env, std::size_t max_nodes)
      : m_(m), e_(e), env_(std::move(env)), max_nodes_(max_nodes) {
    cap_ = m.size() + e.theta.size() + bound_outside_theta(e).size();
    value_.assign(e.theta.size(), 0);
    for (const auto& t : e.theta) {
      std::vector<std::size_t> idx;
      for (const auto& a : t.args()) idx.push_back(*e.index_of(a));
      arg_index_.push_back(std::move(idx));
    }
  }

  std::optional<ExtensionWitness> run() {
    size_ = m_.size();
    if (place(0)) return found_;
    return std::nullopt;
  }

 private:
  using Cell = std::pair<std::string, std::vector<Element>>;

  void tick() {
    if (++nodes_ > max_nodes_)
      throw ResourceLimit("extension search exceeded " + std::to_string(max_nodes_) + " nodes");
  }

  bool consistent_with_classes(std::size_t i) const {
    for (std::size_t j = 0; j < i; ++j)
      if ((value_[j] == value_[i]) != (e_.classes[j] == e_.classes[i])) return false;
    return true;
  }

  bool try_value(std::size_t i, Element v, const std::optional<Cell>& cell) {
    tick();
    value_[i] = v;
    if (!consistent_with_classes(i)) return false;
    const bool is_new = v == size_;
    if (is_new) ++size_;
    if (cell) cells_[*cell] = v;
    bool ok = place(i + 1);
    if (cell && !ok) cells_.erase(*cell);
    if (is_new && !ok) --size_;
    return ok;
  }

  // Values available for a term that is not determined yet.
  bool choose(std::size_t i, const std::optional<Cell>& cell) {
    std::size_t top = std::min(size_ + 1, cap_);
    for (Element v = 0; v < top; ++v)
      if (try_value(i, v, cell)) return true;
    return false;
  }

  bool place(std::size_t i) {
    if (i == e_.theta.size()) return finish();
    const Term& t = e_.theta[i];
    if (t.is_var()) {
      if (auto it = env_.find(t.name()); it != env_.end() && e_.is_free(t.name())) return try_value(i, it->second, {});
      return choose(i, {});
    }
    std::vector<Element> args;
    bool inside = true;
    for (std::size_t a : arg_index_[i]) {
      args.push_back(value_[a]);
      inside = inside && value_[a] < m_.size();
    }
    if (inside) return try_value(i, m_.apply(t.name(), args), {});
    Cell cell{t.name(), args};
    if (auto it = cells_.find(cell); it != cells_.end()) return try_value(i, it->second, {});
    return choose(i, cell);
  }

  bool finish() {
    std::map<Cell, bool> rel;
    for (const auto& [key, bit] : e_.epsilon) {
      std::vector<Element> args;
      bool inside = true;
      for (std::size_t a : key.args) {
        args.push_back(value_[a]);
        inside = inside && value_[a] < m_.size();
      }
      if (inside) {
        if (m_.holds(key.relation, args) != bit) return false;
        continue;
      }
      auto [it, inserted] = rel.emplace(Cell{key.relation, args}, bit);
      if (!inserted && it->second != bit) return false;
    }
    auto loose = bound_outside_theta(e_);
    std::size_t n = size_;
    if (!loose.empty() && n == 0) n = 1;
    ExtensionWitness w{n == m_.size() ? m_ : enlarge(m_, n, 0), env_};
    for (const auto& [cell, v] : cells_) w.structure.set_function(cell.first, cell.second, v);
    for (const auto& [cell, bit] : rel) w.structure.set_relation(cell.first, cell.second, bit);
    for (std::size_t i = 0; i < e_.theta.size(); ++i)
      if (e_.theta[i].is_var()) w.assignment[e_.theta[i].name()] = value_[i];
    for (const auto& y : loose) w.assignment[y] = 0;
    if (!w.structure.extends(m_) || !eval_formula(w.structure, theta_formula(e_), w.assignment)) return false;
    found_ = std::move(w);
    return true;
  }

  const FiniteStructure& m_;
  const ElementaryExistential& e_;
  Environment env_;
  std::size_t max_nodes_;
  std::size_t cap_ = 0;
  std::size_t size_ = 0;
  std::size_t nodes_ = 0;
  std::vector<Element> value_;
  std::vector<std::vector<std::size_t>> arg_index_;
  std::map<Cell, Element> cells_;
  std::optional<ExtensionWitness> found_;
};

}  // namespace detail

/// Exhaustive search for an extension with at most |M| + |theta| elements
/// (plus one per bound variable outside theta), without consulting Xi.
inline std::optional<ExtensionWitness> blind_extension(const FiniteStructure& m, const std::vector<Element>& u,
                                                       const ElementaryExistential& e, const Limits& limits = {}) {
  validate(e);
  detail::check_symbols(e, m);
  Environment env = detail::free_assignment(e, m, u);
  return detail::BlindSearch(m, e, std::move(env), limits.max_search_nodes).run();
}

inline std::optional<ExtensionWitness> extension_satisfies(const FiniteStructure& m, const std::vector<Element>& u,
                                                           const ElementaryExistential& e,
                                                           ExtensionMethod method = ExtensionMethod::Constructive,
                                                           const Limits& limits = {}) {
  if (method == ExtensionMethod::Constructive) return constructive_extension(m, u, e);
  return blind_extension(m, u, e, limits);
}

}  // namespace ecl
