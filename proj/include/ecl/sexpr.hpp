// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ecl/errors.hpp"

namespace ecl {

/// A parenthesized token tree with source positions, shared by every file
/// grammar in the library. `;` starts a comment that runs to end of line.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom() const noexcept { return !is_list; }
  bool is_atom(std::string_view text) const { return !is_list && atom == text; }
  // Head atom of a non-empty list whose first item is an atom, else "".
  std::string_view head() const {
    if (!is_list || items.empty() || items.front().is_list) return {};
    return items.front().atom;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line, column); }
};

namespace detail {

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = column_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, column_);
    if (c == '(') {
      e.is_list = true;
      advance();
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unterminated list opened", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      e.atom.push_back(d);
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace detail

inline std::vector<SExpr> read_sexprs(std::string_view text) { return detail::SExprReader(text).read_all(); }

inline SExpr read_sexpr(std::string_view text) {
  auto all = read_sexprs(text);
  if (all.empty()) throw ParseError("empty input", 1, 1);
  if (all.size() > 1) all[1].fail("trailing input after expression");
  return all.front();
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto first = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(first) || s.front() == '_')) return false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_' || c == '\'')) return false;
  }
  return true;
}

inline std::size_t parse_natural(const SExpr& e) {
  if (e.is_list || e.atom.empty() || e.atom.size() > 18) e.fail("expected a non-negative integer");
  std::size_t v = 0;
  for (char c : e.atom) {
    if (c < '0' || c > '9') e.fail("expected a non-negative integer, got '" + e.atom + "'");
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

}  // namespace ecl
