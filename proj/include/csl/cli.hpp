#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csl/contact.hpp"
#include "csl/fixtures.hpp"
#include "csl/logic.hpp"
#include "csl/representation.hpp"
#include "csl/semilattice.hpp"
#include "csl/structure_io.hpp"

namespace csl::cli {

// exit codes: 0 pass/true/nothing-found, 1 fail/false/countermodel, 2 errors
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

namespace detail {

inline std::string witness_names(const JoinSemilattice& s, const std::vector<Element>& w) {
  std::string out = "(";
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += s.name(w[i]);
  }
  return out + ")";
}

inline std::string pair_names(const JoinSemilattice& s,
                              const std::vector<std::pair<Element, Element>>& pairs) {
  std::string out = "{";
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ",";
    out += "(" + s.name(pairs[i].first) + "," + s.name(pairs[i].second) + ")";
  }
  return out + "}";
}

inline std::string report_line(const JoinSemilattice& s, const AxiomReport& r) {
  if (r.pass) return r.axiom + ": pass";
  std::string line = r.axiom + ": FAIL witness " + witness_names(s, r.witness);
  if (!r.pairs.empty()) line += " pairs " + pair_names(s, r.pairs);
  return line;
}

inline std::string subset_labels(uint64_t mask, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  for (size_t i = 0; i < labels.size(); ++i)
    if (mask >> i & 1u) {
      if (!first) out += ",";
      out += labels[i];
      first = false;
    }
  return out + "}";
}

inline std::string certificate_text(const EmbeddingWitness& w) {
  std::ostringstream out;
  out << "base:";
  for (const auto& l : w.target.base_labels) out << " " << l;
  out << "\n";
  for (Element a = 0; a < w.source.size(); ++a)
    out << "map " << w.source.lattice.name(a) << " -> "
        << subset_labels(w.map[static_cast<size_t>(a)], w.target.base_labels) << "\n";
  if (w.target.kind == PowersetContactAlgebra::Kind::Overlap) {
    out << "contact overlap\n";
  } else {
    out << "contact pairs:\n";
    for (const auto& [u, v] : w.target.pairs)
      out << "  (" << subset_labels(u, w.target.base_labels) << ","
          << subset_labels(v, w.target.base_labels) << ")\n";
  }
  out << "verified: " << (w.report.pass() ? "yes" : "no") << "\n";
  return out.str();
}

inline uint32_t parse_filters(const std::string& list) {
  uint32_t filters = kFilterWeak;
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "weak") filters |= kFilterWeak;
    else if (item == "add") filters |= kFilterAdd;
    else if (item == "d1") filters |= kFilterD1;
    else if (item == "d2") filters |= kFilterD2;
    else throw Error("unknown filter: " + item);
  }
  return filters;
}

}  // namespace detail

/// Runs one CLI invocation. args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"weak contact join-semilattices: axiom checking, representation "
               "certificates, bounded countermodel search"};
  app.name("csl");
  app.require_subcommand(1);

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a structure file");
  validate->add_option("file", validate_path)->required();

  // axioms
  std::string axioms_path, axioms_list = "sym,emp,ext,ref,add,d1,d1plus,d2";
  int axioms_max_n = 3, axioms_budget = 16;
  auto* axioms = app.add_subcommand("axioms", "run axiom checkers");
  axioms->add_option("file", axioms_path)->required();
  axioms->add_option("--axioms", axioms_list, "comma list: sym,emp,ext,ref,add,d1,d1plus,d2");
  axioms->add_option("--max-n", axioms_max_n, "schema depth for d1plus");
  axioms->add_option("--budget", axioms_budget, "d2 pair-pool budget");

  // embed
  std::string embed_path, embed_mode = "overlap", embed_out;
  bool embed_bounded = false;
  int embed_budget = 16;
  auto* embed = app.add_subcommand("embed", "construct a representation certificate");
  embed->add_option("file", embed_path)->required();
  embed->add_option("--mode", embed_mode)->check(CLI::IsMember({"overlap", "weak"}));
  embed->add_flag("--bounded", embed_bounded, "represent over base minus the top element");
  embed->add_option("--budget", embed_budget, "d2 pair-pool budget");
  embed->add_option("-o,--output", embed_out, "write the certificate here too");

  // eval
  std::string eval_path, eval_sentence;
  auto* evalc = app.add_subcommand("eval", "evaluate a universal sentence on a structure");
  evalc->add_option("file", eval_path)->required();
  evalc->add_option("--sentence", eval_sentence)->required();

  // refute
  std::string refute_sentence, refute_theory = "d1";
  int refute_max = 6, refute_budget = 16;
  auto* refutec = app.add_subcommand("refute", "search for a finite countermodel");
  refutec->add_option("--sentence", refute_sentence)->required();
  refutec->add_option("--theory", refute_theory)->check(CLI::IsMember({"d1", "d1d2"}));
  refutec->add_option("--max-size", refute_max);
  refutec->add_option("--budget", refute_budget, "d2 pair-pool budget");

  // enumerate
  int enum_max = 4;
  std::string enum_filter = "weak";
  bool enum_count_only = false, enum_prune = false;
  auto* enumc = app.add_subcommand("enumerate", "stream weak contact semilattices");
  enumc->add_option("--max-size", enum_max);
  enumc->add_option("--filter", enum_filter, "comma list: weak,add,d1,d2");
  enumc->add_flag("--count-only", enum_count_only);
  enumc->add_flag("--prune-iso", enum_prune, "emit only canonical forms");

  // fixture
  std::string fixture_name, fixture_out;
  auto* fixturec = app.add_subcommand("fixture", "emit a named example structure");
  fixturec->add_option("name", fixture_name)->required();
  fixturec->add_option("-o,--output", fixture_out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitPass;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*validate) {
      load_structure(validate_path);
      out << "valid: yes\n";
      return kExitPass;
    }

    if (*axioms) {
      const auto cs = load_structure(axioms_path);
      bool any_fail = false;
      std::istringstream in(axioms_list);
      std::string key;
      while (std::getline(in, key, ',')) {
        AxiomReport r;
        if (key == "sym") r = check_sym(cs);
        else if (key == "emp") r = check_emp(cs);
        else if (key == "ext") r = check_ext(cs);
        else if (key == "ref") r = check_ref(cs);
        else if (key == "add") r = check_add(cs);
        else if (key == "d1") r = check_d1(cs);
        else if (key == "d1plus") r = check_d1plus(cs, axioms_max_n);
        else if (key == "d2") r = check_d2(cs, axioms_budget);
        else throw Error("unknown axiom: " + key);
        out << detail::report_line(cs.lattice, r) << "\n";
        any_fail |= !r.pass;
      }
      return any_fail ? kExitFail : kExitPass;
    }

    if (*embed) {
      const auto cs = load_structure(embed_path);
      const EmbedResult result = embed_mode == "overlap"
                                     ? overlap_embed(cs, embed_bounded, embed_budget)
                                     : weak_embed(cs, embed_bounded);
      if (const auto* pre = std::get_if<PreconditionFailed>(&result)) {
        out << "precondition: " << detail::report_line(cs.lattice, pre->report) << "\n";
        return kExitFail;
      }
      if (const auto* ind = std::get_if<Indeterminate>(&result)) {
        err << "indeterminate: " << ind->reason << "\n";
        return kExitError;
      }
      const auto& w = std::get<EmbeddingWitness>(result);
      const std::string cert = detail::certificate_text(w);
      out << cert;
      if (!embed_out.empty()) {
        std::ofstream f(embed_out);
        if (!f) throw Error("cannot write " + embed_out);
        f << cert;
      }
      return w.report.pass() ? kExitPass : kExitFail;
    }

    if (*evalc) {
      const auto cs = load_structure(eval_path);
      const auto sentence = parse_sentence(eval_sentence);
      const auto r = eval(sentence, cs);
      out << "result: " << (r.holds ? "true" : "false") << "\n";
      if (!r.holds) {
        out << "assignment:";
        for (size_t i = 0; i < sentence.variables.size(); ++i)
          out << " " << sentence.variables[i] << "="
              << cs.lattice.name(r.assignment[i]);
        out << "\n";
      }
      return r.holds ? kExitPass : kExitFail;
    }

    if (*refutec) {
      const auto sentence = parse_sentence(refute_sentence);
      const Theory theory = refute_theory == "d1" ? Theory::D1 : Theory::D1D2;
      const auto r = refute(sentence, theory, refute_max, refute_budget);
      if (r.found) {
        out << "countermodel: found\n";
        out << "size: " << r.model.size() << "\n";
        out << print_structure(r.model);
        out << "assignment:";
        for (size_t i = 0; i < sentence.variables.size(); ++i)
          out << " " << sentence.variables[i] << "="
              << r.model.lattice.name(r.assignment[i]);
        out << "\n";
        return kExitFail;
      }
      out << "countermodel: none up to size " << r.bound << "\n";
      out << "structures checked: " << r.structures_checked << "\n";
      return kExitPass;
    }

    if (*enumc) {
      EnumerateOptions opts;
      opts.max_size = enum_max;
      opts.size_cap = enum_max;
      opts.filters = detail::parse_filters(enum_filter);
      opts.prune_iso = enum_prune;
      std::map<int, long long> counts;
      enumerate_structures(opts, [&](const ContactSemilattice& cs) {
        ++counts[cs.size()];
        if (!enum_count_only) out << print_structure(cs) << "\n";
        return true;
      });
      long long total = 0;
      for (int m = 1; m <= enum_max; ++m) {
        out << "size " << m << ": " << counts[m] << "\n";
        total += counts[m];
      }
      out << "total: " << total << "\n";
      return kExitPass;
    }

    if (*fixturec) {
      const auto cs = fixture(fixture_name);
      const std::string text = print_structure(cs, fixture_notes(fixture_name));
      out << text;
      if (!fixture_out.empty()) {
        std::ofstream f(fixture_out);
        if (!f) throw Error("cannot write " + fixture_out);
        f << text;
      }
      return kExitPass;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace csl::cli
