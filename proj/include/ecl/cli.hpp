// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ecl/decide.hpp"
#include "ecl/errors.hpp"
#include "ecl/interp.hpp"
#include "ecl/oracle.hpp"
#include "ecl/qe.hpp"
#include "ecl/structures.hpp"
#include "ecl/text.hpp"
#include "ecl/trep.hpp"

// Command line front end. run_cli is separate from main so that tests can
// drive it with in-memory streams.

namespace ecl {

namespace exit_code {
inline constexpr int usage = 64;  // file, parse and signature errors too
inline constexpr int resource = 65;
inline constexpr int invariant = 70;
}  // namespace exit_code

struct RunConfig {
  std::string command;
  std::string sig_path;
  std::string formula_path;
  std::string structure_path;
  std::string translation_path;
  std::string tables_path;
  std::string style = "constants";
  std::string suite = "res";
  std::size_t bound = 2;
  std::size_t cases = 500;
  std::uint64_t seed = 7;
  bool relations = false;
  bool verbose = false;
  Limits limits;
};

namespace detail {

inline std::string slurp(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream f(path);
  if (!f) throw InputError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline const std::string& need(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing ") + flag);
  return value;
}

inline NumeralStyle parse_style(const std::string& s) {
  if (s == "constants") return NumeralStyle::Constants;
  if (s == "successor") return NumeralStyle::Successor;
  if (s == "tprfu") return NumeralStyle::Tprfu;
  throw InputError("unknown numeral style '" + s + "'");
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::istream& in, std::ostream& out) : cfg_(cfg), in_(in), out_(out) {}

  int run() {
    const std::string& c = cfg_.command;
    if (c == "qe") return qe();
    if (c == "decide") return decide_cmd();
    if (c == "decide-diag") return decide_diag();
    if (c == "translate") return translate_cmd();
    if (c == "check-interp") return check_interp();
    if (c == "binary-reduce") return binary_reduce();
    if (c == "gen-trep") return gen_trep();
    if (c == "gen-r") return gen_r();
    if (c == "oracle") return oracle();
    throw InputError("unknown command '" + c + "'");
  }

 private:
  Signature signature() { return parse_signature(slurp(need(cfg_.sig_path, "--sig"), in_)); }

  std::vector<Formula> formulas(const Signature& sig) {
    auto fs = parse_formulas(slurp(need(cfg_.formula_path, "--formula"), in_), sig);
    if (fs.empty()) throw InputError("no formula in input");
    return fs;
  }

  int qe() {
    Signature sig = signature();
    for (const auto& f : formulas(sig)) {
      check_formula(f, sig);
      Formula g = eliminate(f, cfg_.limits);
      if (cfg_.verbose) out_ << "; input " << f << "\n";
      out_ << g << "\n";
    }
    return 0;
  }

  int report(const DecisionResult& r) {
    if (cfg_.verbose) {
      out_ << "; quantifier-free image " << r.equivalent << "\n";
      auto show = [&](const char* what, const std::optional<LiteralAssignment>& a) {
        if (!a) return;
        out_ << "; " << what << ":";
        for (const auto& l : *a) out_ << ' ' << l;
        out_ << "\n";
      };
      if (r.verdict == Verdict::Contingent) {
        show("satisfying assignment", r.satisfying);
        show("falsifying assignment", r.falsifying);
      }
    }
    out_ << verdict_token(r.verdict) << "\n";
    return verdict_exit_code(r.verdict);
  }

  int decide_cmd() {
    Signature sig = signature();
    int code = 0;
    for (const auto& f : formulas(sig)) code = report(decide(f, sig, cfg_.limits));
    return code;
  }

  int decide_diag() {
    Signature sig = signature();
    FiniteStructure m = parse_structure(slurp(need(cfg_.structure_path, "--structure"), in_), sig);
    Diagram d = diagram(m);
    if (cfg_.verbose) {
      out_ << "; element constants";
      for (const auto& n : d.element_names) out_ << ' ' << n;
      out_ << "\n";
    }
    int code = 0;
    for (const auto& f : formulas(d.expanded)) code = report(decide_with_diagram(m, f, cfg_.limits));
    return code;
  }

  Translation translation() {
    std::optional<Signature> src;
    if (!cfg_.sig_path.empty()) src = signature();
    return parse_translation(slurp(need(cfg_.translation_path, "--translation"), in_), src);
  }

  int translate_cmd() {
    Translation t = translation();
    for (const auto& f : formulas(t.source)) out_ << translate(t, f) << "\n";
    return 0;
  }

  int check_interp() {
    Translation t = translation();
    std::vector<Formula> axioms;
    if (!cfg_.formula_path.empty()) axioms = formulas(t.source);
    ObligationReport rep = obligations(t, axioms, true, {}, cfg_.limits);
    for (const auto& o : rep.items) {
      out_ << o.label << ": ";
      if (o.result)
        out_ << verdict_token(o.result->verdict);
      else
        out_ << "undischarged (" << o.note << ")";
      if (cfg_.verbose) out_ << "  " << o.sentence;
      out_ << "\n";
    }
    out_ << "PASS " << rep.discharged() << "/" << rep.items.size() << "\n";
    return rep.discharged() == rep.items.size() ? 0 : 2;
  }

  int binary_reduce() {
    Signature sig = signature();
    BinaryReduction b = binary_reduction(sig, cfg_.relations);
    out_ << print_translation(b.translation);
    for (const auto& d : b.distinctness) out_ << "; distinct " << d << "\n";
    if (!cfg_.formula_path.empty())
      for (const auto& f : formulas(sig)) out_ << translate(b.translation, f) << "\n";
    return 0;
  }

  int gen_trep() {
    RepTables tables = parse_tables(slurp(need(cfg_.tables_path, "--tables"), in_));
    NumeralStyle style = parse_style(cfg_.style);
    auto axioms = trep_axioms(tables, style);
    FiniteStructure m = table_structure(tables, style);
    std::size_t ok = 0;
    for (const auto& a : axioms) {
      out_ << a << "\n";
      if (eval_formula(m, a)) ++ok;
    }
    out_ << "PASS " << ok << "/" << axioms.size() << "\n";
    if (ok != axioms.size()) throw InvariantViolation("table structure falsifies a generated axiom");
    return 0;
  }

  int gen_r() {
    auto axioms = r_axioms(cfg_.bound);
    FiniteStructure m = r_fragment_model(cfg_.bound);
    std::size_t ok = 0;
    for (const auto& a : axioms) {
      out_ << a << "\n";
      if (eval_formula(m, a)) ++ok;
    }
    if (cfg_.verbose) out_ << "; model\n" << print_structure(m);
    out_ << "PASS " << ok << "/" << axioms.size() << "\n";
    if (ok != axioms.size()) throw InvariantViolation("collapsed model falsifies a generated axiom");
    return 0;
  }

  int oracle() {
    std::vector<SuiteReport> reports;
    const std::string& s = cfg_.suite;
    if (s != "res" && s != "euf" && s != "all") throw InputError("unknown suite '" + s + "'");
    if (s == "res" || s == "all") reports.push_back(run_resultant_suite(cfg_.cases, cfg_.seed, cfg_.limits));
    if (s == "euf" || s == "all") reports.push_back(run_euf_suite(cfg_.cases, cfg_.seed, cfg_.limits));
    std::size_t passed = 0, total = 0;
    for (const auto& r : reports) {
      out_ << r.name << ": " << r.passed << "/" << r.total << " agree (" << r.positives << " positive)\n";
      for (const auto& f : r.failures) out_ << "; " << f << "\n";
      passed += r.passed;
      total += r.total;
    }
    if (passed != total) {
      out_ << "FAIL " << passed << "/" << total << "\n";
      return exit_code::invariant;
    }
    out_ << "PASS " << passed << "/" << total << "\n";
    return 0;
  }

  const RunConfig& cfg_;
  std::istream& in_;
  std::ostream& out_;
};

}  // namespace detail

inline int run(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    return detail::Runner(cfg, in, out).run();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return exit_code::resource;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::invariant;
  }
}

inline int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantifier elimination and decision procedures for existentially closed structures"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--sig", cfg.sig_path, "signature file");
  app.add_option("--formula", cfg.formula_path, "formula file, or - for standard input");
  app.add_option("--structure", cfg.structure_path, "finite structure file");
  app.add_option("--translation", cfg.translation_path, "translation file");
  app.add_option("--tables", cfg.tables_path, "tables file for gen-trep");
  app.add_option("--style", cfg.style, "numeral style: constants, successor or tprfu");
  app.add_option("--bound", cfg.bound, "bound b for gen-r");
  app.add_option("--suite", cfg.suite, "oracle suite: res, euf or all");
  app.add_option("--max-theta", cfg.limits.max_theta, "largest term set in one decomposition")->check(CLI::PositiveNumber);
  app.add_option("--max-partitions", cfg.limits.max_partitions, "partition enumeration cap")->check(CLI::PositiveNumber);
  app.add_option("--max-model", cfg.limits.max_model, "largest structure size for finite-model checks")
      ->check(CLI::PositiveNumber);
  app.add_option("--cases", cfg.cases, "number of oracle cases");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_flag("--relations", cfg.relations, "binary-reduce: also reduce relation symbols");
  app.add_flag("--verbose", cfg.verbose, "print intermediate artifacts");
  for (const char* name : {"qe", "decide", "decide-diag", "translate", "check-interp", "binary-reduce", "gen-trep",
                           "gen-r", "oracle"})
    app.add_subcommand(name)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg, in, out, err);
}

}  // namespace ecl
