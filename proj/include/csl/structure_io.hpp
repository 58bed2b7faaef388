#pragma once

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csl/contact.hpp"
#include "csl/logic.hpp"
#include "csl/semilattice.hpp"

namespace csl {

/// Line-oriented structure file. `#` starts a comment.
///
///   elements <name>+
///   zero <name>
///   le <a> <b> ...            or   join <a> <b> = <c> ...
///   contact <a> <b> ...       or   contact overlap
///   top <name>                (optional)
struct StructureFile {
  std::vector<std::string> names;
  std::string zero_name;
  std::vector<std::pair<std::string, std::string>> le_decls;
  std::vector<std::array<std::string, 3>> join_decls;
  std::vector<std::pair<std::string, std::string>> contact_decls;
  bool contact_overlap = false;
  std::string top_name;  // empty when absent
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

}  // namespace detail

inline StructureFile parse_structure_file(const std::string& text) {
  StructureFile sf;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto err = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg, static_cast<size_t>(lineno));
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key == "elements") {
      if (tok.size() < 2) err("elements needs at least one name");
      sf.names.assign(tok.begin() + 1, tok.end());
    } else if (key == "zero") {
      if (tok.size() != 2) err("zero needs exactly one name");
      sf.zero_name = tok[1];
    } else if (key == "le") {
      if (tok.size() != 3) err("le needs two names");
      sf.le_decls.emplace_back(tok[1], tok[2]);
    } else if (key == "join") {
      if (tok.size() != 5 || tok[3] != "=") err("join line must read: join a b = c");
      sf.join_decls.push_back({tok[1], tok[2], tok[4]});
    } else if (key == "contact") {
      if (tok.size() == 2 && tok[1] == "overlap") {
        sf.contact_overlap = true;
      } else {
        if (tok.size() != 3) err("contact needs two names or the word overlap");
        sf.contact_decls.emplace_back(tok[1], tok[2]);
      }
    } else if (key == "top") {
      if (tok.size() != 2) err("top needs exactly one name");
      sf.top_name = tok[1];
    } else {
      err("unknown directive: " + key);
    }
  }
  if (sf.names.empty()) err("missing elements line");
  if (sf.zero_name.empty()) err("missing zero line");
  if (!sf.le_decls.empty() && !sf.join_decls.empty()) err("mix of le and join declarations");
  if (sf.contact_overlap && !sf.contact_decls.empty())
    err("mix of contact pairs and contact overlap");
  return sf;
}

/// Builds the validated structure: order declarations are closed
/// reflexively and transitively before joins are computed as least upper
/// bounds; contact pairs are closed symmetrically.
inline ContactSemilattice to_contact_semilattice(const StructureFile& sf) {
  const int n = static_cast<int>(sf.names.size());
  std::map<std::string, Element> index;
  for (int i = 0; i < n; ++i) {
    if (index.count(sf.names[static_cast<size_t>(i)]))
      throw ValidationError("duplicate element name: " + sf.names[static_cast<size_t>(i)]);
    index[sf.names[static_cast<size_t>(i)]] = i;
  }
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw ValidationError("unknown element name: " + name);
    return it->second;
  };
  const Element zero = lookup(sf.zero_name);

  JoinSemilattice lattice;
  if (!sf.join_decls.empty()) {
    std::vector<Element> table(static_cast<size_t>(n) * static_cast<size_t>(n), -1);
    auto at = [&](Element a, Element b) -> Element& {
      return table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)];
    };
    for (Element a = 0; a < n; ++a) {
      at(a, a) = a;
      at(zero, a) = a;
      at(a, zero) = a;
    }
    for (const auto& d : sf.join_decls) {
      const Element a = lookup(d[0]), b = lookup(d[1]), c = lookup(d[2]);
      if (at(a, b) != -1 && at(a, b) != c)
        throw ValidationError("conflicting join declarations for " + d[0] + ", " + d[1]);
      at(a, b) = c;
      at(b, a) = c;
    }
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        if (at(a, b) == -1)
          throw ValidationError("missing join declaration for " +
                                sf.names[static_cast<size_t>(a)] + ", " +
                                sf.names[static_cast<size_t>(b)]);
    lattice = make_semilattice(sf.names, zero, std::move(table));
  } else {
    std::vector<std::vector<bool>> leq(static_cast<size_t>(n),
                                       std::vector<bool>(static_cast<size_t>(n), false));
    for (Element a = 0; a < n; ++a) {
      leq[static_cast<size_t>(a)][static_cast<size_t>(a)] = true;
      leq[static_cast<size_t>(zero)][static_cast<size_t>(a)] = true;
    }
    for (const auto& d : sf.le_decls)
      leq[static_cast<size_t>(lookup(d.first))][static_cast<size_t>(lookup(d.second))] = true;
    for (Element k = 0; k < n; ++k)  // transitive closure
      for (Element a = 0; a < n; ++a)
        for (Element b = 0; b < n; ++b)
          if (leq[static_cast<size_t>(a)][static_cast<size_t>(k)] &&
              leq[static_cast<size_t>(k)][static_cast<size_t>(b)])
            leq[static_cast<size_t>(a)][static_cast<size_t>(b)] = true;
    for (Element a = 0; a < n; ++a)
      for (Element b = a + 1; b < n; ++b)
        if (leq[static_cast<size_t>(a)][static_cast<size_t>(b)] &&
            leq[static_cast<size_t>(b)][static_cast<size_t>(a)])
          throw ValidationError("order cycle between " + sf.names[static_cast<size_t>(a)] +
                                " and " + sf.names[static_cast<size_t>(b)]);
    lattice = make_semilattice(sf.names, zero, join_table_from_order(leq, &sf.names));
  }

  ContactRelation contact(n);
  if (sf.contact_overlap) {
    contact = overlap_contact(lattice);
  } else {
    for (const auto& d : sf.contact_decls) contact.set(lookup(d.first), lookup(d.second));
  }

  if (!sf.top_name.empty()) {
    const Element t = lookup(sf.top_name);
    for (Element a = 0; a < n; ++a)
      if (!lattice.leq(a, t))
        throw ValidationError("declared top " + sf.top_name + " is not a maximum");
  }
  return {std::move(lattice), std::move(contact)};
}

inline ContactSemilattice load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return to_contact_semilattice(parse_structure_file(buf.str()));
}

/// Canonical text form: cover pairs of the order plus explicit contact
/// pairs. Parsing the result reproduces the structure exactly.
inline std::string print_structure(const ContactSemilattice& cs,
                                   const std::vector<std::string>& notes = {}) {
  const auto& s = cs.lattice;
  const int n = s.size();
  std::ostringstream out;
  for (const auto& note : notes) out << "# " << note << "\n";
  out << "elements";
  for (const auto& name : s.names()) out << " " << name;
  out << "\n";
  out << "zero " << s.name(s.zero()) << "\n";
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (a == b || !s.leq(a, b)) continue;
      bool cover = true;  // no c strictly between a and b
      for (Element c = 0; c < n && cover; ++c)
        if (c != a && c != b && s.leq(a, c) && s.leq(c, b)) cover = false;
      if (cover) out << "le " << s.name(a) << " " << s.name(b) << "\n";
    }
  for (Element a = 0; a < n; ++a)
    for (Element b = a; b < n; ++b)
      if (cs.delta(a, b)) out << "contact " << s.name(a) << " " << s.name(b) << "\n";
  if (auto t = s.top()) out << "top " << s.name(*t) << "\n";
  return out.str();
}

}  // namespace csl
