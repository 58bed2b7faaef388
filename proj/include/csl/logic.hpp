#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csl/contact.hpp"
#include "csl/semilattice.hpp"

namespace csl {

struct CapExceededError : Error {
  using Error::Error;
};

struct ParseError : Error {
  size_t position = 0;
  std::vector<std::string> expected;
  ParseError(const std::string& msg, size_t pos, std::vector<std::string> exp = {})
      : Error(msg), position(pos), expected(std::move(exp)) {}
};

// -- sentence AST -----------------------------------------------------------

struct Term {
  enum class Kind { Var, Zero, Join };
  Kind kind = Kind::Zero;
  int var = -1;
  std::unique_ptr<Term> lhs, rhs;
};

struct Formula {
  enum class Kind { Atom, Not, And, Or, Implies };
  enum class Rel { Leq, Eq, Contact };
  Kind kind = Kind::Atom;
  Rel rel = Rel::Leq;
  std::unique_ptr<Term> tl, tr;       // Atom
  std::unique_ptr<Formula> fl, fr;    // Not uses fl only
};

/// A universal sentence: quantifier prefix plus quantifier-free matrix over
/// atoms t<=t, t=t, t C t.
struct Sentence {
  std::vector<std::string> variables;
  std::unique_ptr<Formula> matrix;
  std::string text;
};

// -- parser -----------------------------------------------------------------

namespace detail {

struct Token {
  enum class Kind { Forall, Ident, Zero, Dot, Arrow, Or, And, Not, LParen, RParen,
                    Leq, Eq, Contact, Plus, End };
  Kind kind;
  std::string text;
  size_t pos;
};

inline std::vector<Token> lex_sentence(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
      std::string word = s.substr(i, j - i);
      if (word == "forall")
        out.push_back({Token::Kind::Forall, word, start});
      else if (word == "C")
        out.push_back({Token::Kind::Contact, word, start});
      else
        out.push_back({Token::Kind::Ident, word, start});
      i = j;
      continue;
    }
    switch (c) {
      case '0': out.push_back({Token::Kind::Zero, "0", start}); ++i; break;
      case '.': out.push_back({Token::Kind::Dot, ".", start}); ++i; break;
      case '|': out.push_back({Token::Kind::Or, "|", start}); ++i; break;
      case '&': out.push_back({Token::Kind::And, "&", start}); ++i; break;
      case '~': out.push_back({Token::Kind::Not, "~", start}); ++i; break;
      case '(': out.push_back({Token::Kind::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Token::Kind::RParen, ")", start}); ++i; break;
      case '+': out.push_back({Token::Kind::Plus, "+", start}); ++i; break;
      case '=': out.push_back({Token::Kind::Eq, "=", start}); ++i; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Token::Kind::Arrow, "->", start});
          i += 2;
          break;
        }
        throw ParseError("unexpected character '-'", start, {"->"});
      case '<':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          out.push_back({Token::Kind::Leq, "<=", start});
          i += 2;
          break;
        }
        throw ParseError("unexpected character '<'", start, {"<="});
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Token::Kind::End, "", s.size()});
  return out;
}

class SentenceParser {
 public:
  explicit SentenceParser(const std::string& text)
      : text_(text), tokens_(lex_sentence(text)) {}

  Sentence parse() {
    Sentence s;
    s.text = text_;
    expect(Token::Kind::Forall, "forall");
    while (peek().kind == Token::Kind::Ident) {
      for (const auto& v : vars_)
        if (v == peek().text)
          throw ParseError("duplicate variable " + peek().text, peek().pos);
      vars_.push_back(next().text);
    }
    if (vars_.empty()) fail({"variable name"});
    expect(Token::Kind::Dot, ".");
    s.matrix = parse_formula();
    if (peek().kind != Token::Kind::End) fail({"end of sentence"});
    s.variables = vars_;
    return s;
  }

 private:
  const std::string& text_;
  std::vector<Token> tokens_;
  size_t at_ = 0;
  std::vector<std::string> vars_;
  size_t far_pos_ = 0;
  std::vector<std::string> far_expected_;

  const Token& peek() const { return tokens_[at_]; }
  const Token& next() { return tokens_[at_++]; }

  void note(const std::vector<std::string>& expected) {
    const size_t pos = peek().pos;
    if (pos > far_pos_) {
      far_pos_ = pos;
      far_expected_ = expected;
    } else if (pos == far_pos_) {
      for (const auto& e : expected)
        if (std::find(far_expected_.begin(), far_expected_.end(), e) == far_expected_.end())
          far_expected_.push_back(e);
    }
  }

  [[noreturn]] void fail(const std::vector<std::string>& expected) {
    note(expected);
    std::string msg = "parse error at position " + std::to_string(far_pos_) + ": expected ";
    for (size_t i = 0; i < far_expected_.size(); ++i) {
      if (i) msg += " or ";
      msg += far_expected_[i];
    }
    throw ParseError(msg, far_pos_, far_expected_);
  }

  void expect(Token::Kind kind, const char* what) {
    if (peek().kind != kind) fail({what});
    next();
  }

  std::unique_ptr<Formula> parse_formula() { return parse_implies(); }

  std::unique_ptr<Formula> parse_implies() {
    auto lhs = parse_or();
    if (peek().kind == Token::Kind::Arrow) {
      next();
      auto node = std::make_unique<Formula>();
      node->kind = Formula::Kind::Implies;
      node->fl = std::move(lhs);
      node->fr = parse_implies();
      return node;
    }
    return lhs;
  }

  std::unique_ptr<Formula> parse_or() {
    auto lhs = parse_and();
    while (peek().kind == Token::Kind::Or) {
      next();
      auto node = std::make_unique<Formula>();
      node->kind = Formula::Kind::Or;
      node->fl = std::move(lhs);
      node->fr = parse_and();
      lhs = std::move(node);
    }
    return lhs;
  }

  std::unique_ptr<Formula> parse_and() {
    auto lhs = parse_unary();
    while (peek().kind == Token::Kind::And) {
      next();
      auto node = std::make_unique<Formula>();
      node->kind = Formula::Kind::And;
      node->fl = std::move(lhs);
      node->fr = parse_unary();
      lhs = std::move(node);
    }
    return lhs;
  }

  std::unique_ptr<Formula> parse_unary() {
    if (peek().kind == Token::Kind::Not) {
      next();
      auto node = std::make_unique<Formula>();
      node->kind = Formula::Kind::Not;
      node->fl = parse_unary();
      return node;
    }
    // "(" starts either a parenthesized formula or a parenthesized term
    // inside an atom; try the atom reading first and fall back.
    if (peek().kind == Token::Kind::LParen) {
      const size_t save = at_;
      try {
        return parse_atom();
      } catch (const ParseError&) {
        at_ = save;
      }
      next();  // consume "("
      auto inner = parse_formula();
      expect(Token::Kind::RParen, ")");
      return inner;
    }
    if (peek().kind == Token::Kind::Ident || peek().kind == Token::Kind::Zero)
      return parse_atom();
    fail({"~", "(", "term"});
  }

  std::unique_ptr<Formula> parse_atom() {
    auto node = std::make_unique<Formula>();
    node->kind = Formula::Kind::Atom;
    node->tl = parse_term();
    switch (peek().kind) {
      case Token::Kind::Leq: node->rel = Formula::Rel::Leq; break;
      case Token::Kind::Eq: node->rel = Formula::Rel::Eq; break;
      case Token::Kind::Contact: node->rel = Formula::Rel::Contact; break;
      default: fail({"<=", "=", "C"});
    }
    next();
    node->tr = parse_term();
    return node;
  }

  std::unique_ptr<Term> parse_term() {
    auto lhs = parse_factor();
    while (peek().kind == Token::Kind::Plus) {
      next();
      auto node = std::make_unique<Term>();
      node->kind = Term::Kind::Join;
      node->lhs = std::move(lhs);
      node->rhs = parse_factor();
      lhs = std::move(node);
    }
    return lhs;
  }

  std::unique_ptr<Term> parse_factor() {
    if (peek().kind == Token::Kind::Ident) {
      auto node = std::make_unique<Term>();
      node->kind = Term::Kind::Var;
      const auto& name = peek().text;
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end())
        throw ParseError("unbound variable " + name + " at position " +
                             std::to_string(peek().pos),
                         peek().pos, {"bound variable"});
      node->var = static_cast<int>(it - vars_.begin());
      next();
      return node;
    }
    if (peek().kind == Token::Kind::Zero) {
      next();
      auto node = std::make_unique<Term>();
      node->kind = Term::Kind::Zero;
      return node;
    }
    if (peek().kind == Token::Kind::LParen) {
      next();
      auto inner = parse_term();
      expect(Token::Kind::RParen, ")");
      return inner;
    }
    fail({"identifier", "0", "("});
  }
};

}  // namespace detail

inline Sentence parse_sentence(const std::string& text) {
  return detail::SentenceParser(text).parse();
}

// -- evaluation -------------------------------------------------------------

struct EvalResult {
  bool holds = true;
  std::vector<Element> assignment;  // first falsifying assignment when !holds
};

namespace detail {

inline Element eval_term(const Term& t, const ContactSemilattice& cs,
                         const std::vector<Element>& env) {
  switch (t.kind) {
    case Term::Kind::Var: return env[static_cast<size_t>(t.var)];
    case Term::Kind::Zero: return cs.lattice.zero();
    case Term::Kind::Join:
      return cs.lattice.join(eval_term(*t.lhs, cs, env), eval_term(*t.rhs, cs, env));
  }
  return cs.lattice.zero();
}

inline bool eval_formula(const Formula& f, const ContactSemilattice& cs,
                         const std::vector<Element>& env) {
  switch (f.kind) {
    case Formula::Kind::Atom: {
      const Element l = eval_term(*f.tl, cs, env);
      const Element r = eval_term(*f.tr, cs, env);
      switch (f.rel) {
        case Formula::Rel::Leq: return cs.lattice.leq(l, r);
        case Formula::Rel::Eq: return l == r;
        case Formula::Rel::Contact: return cs.delta(l, r);
      }
      return false;
    }
    case Formula::Kind::Not: return !eval_formula(*f.fl, cs, env);
    case Formula::Kind::And: return eval_formula(*f.fl, cs, env) && eval_formula(*f.fr, cs, env);
    case Formula::Kind::Or: return eval_formula(*f.fl, cs, env) || eval_formula(*f.fr, cs, env);
    case Formula::Kind::Implies:
      return !eval_formula(*f.fl, cs, env) || eval_formula(*f.fr, cs, env);
  }
  return false;
}

}  // namespace detail

/// Truth under every assignment; on failure, the lexicographically first
/// falsifying assignment in variable order over element indices.
inline EvalResult eval(const Sentence& s, const ContactSemilattice& cs) {
  const size_t k = s.variables.size();
  std::vector<Element> env(k, 0);
  const int n = cs.size();
  while (true) {
    if (!detail::eval_formula(*s.matrix, cs, env)) return {false, env};
    size_t i = k;
    while (i > 0) {
      --i;
      if (++env[i] < n) break;
      env[i] = 0;
      if (i == 0) return {};
    }
    if (k == 0) return {};
  }
}

// -- structure enumeration --------------------------------------------------

enum StructureFilter : uint32_t {
  kFilterWeak = 1u << 0,
  kFilterAdd = 1u << 1,
  kFilterD1 = 1u << 2,
  kFilterD2 = 1u << 3,
};

struct EnumerateOptions {
  int max_size = 4;
  int size_cap = 6;  // guardrail; raised deliberately by callers that know better
  uint32_t filters = kFilterWeak;
  bool prune_iso = false;
  int d2_budget = 16;
};

namespace detail {

/// Join-semilattices of size m realized as union-closed, empty-containing
/// families of subsets of an m-point base; exhaustive because a(x) = the
/// set of base points not above x embeds any size-m semilattice into the
/// powerset of its own carrier. One labeling per family is kept: members
/// are chosen in descending mask order and each base point's membership
/// column (first-chosen member most significant) must come out strictly
/// ascending, which pins the base labeling of every family shape.
class FamilyEnumerator {
 public:
  FamilyEnumerator(int m, const std::function<bool(const std::vector<uint32_t>&)>& visit)
      : m_(m), visit_(visit), col_(static_cast<size_t>(m), 0) {}

  bool run() { return rec(); }

 private:
  int m_;
  const std::function<bool(const std::vector<uint32_t>&)>& visit_;
  std::vector<uint32_t> mem_;  // chosen nonzero members, descending
  std::vector<uint64_t> col_;

  bool add_ok(uint32_t c) const {
    for (uint32_t x : mem_) {
      const uint32_t u = x | c;
      if (u != x && std::find(mem_.begin(), mem_.end(), u) == mem_.end()) return false;
    }
    // keep columns non-decreasing: inside a tie group the new member's
    // points must sit at the top
    for (int p = 0; p + 1 < m_; ++p)
      if (col_[static_cast<size_t>(p)] == col_[static_cast<size_t>(p + 1)] &&
          (c >> p & 1u) > (c >> (p + 1) & 1u))
        return false;
    return true;
  }

  bool rec() {
    const int k = static_cast<int>(mem_.size());
    if (k == m_ - 1) {
      for (int p = 0; p + 1 < m_; ++p)
        if (col_[static_cast<size_t>(p)] == col_[static_cast<size_t>(p + 1)]) return true;
      std::vector<uint32_t> family;
      family.push_back(0);
      family.insert(family.end(), mem_.rbegin(), mem_.rend());
      return visit_(family);
    }
    const int remaining = m_ - 1 - k;
    int run = 1;
    for (int p = 0; p + 1 < m_; ++p) {
      if (col_[static_cast<size_t>(p)] == col_[static_cast<size_t>(p + 1)]) ++run; else run = 1;
      if (run > (1 << remaining)) return true;  // ties can no longer be broken
    }
    const uint32_t hi = mem_.empty() ? (uint32_t{1} << m_) - 1 : mem_.back() - 1;
    for (uint32_t c = hi; c >= 1; --c) {
      if (!add_ok(c)) continue;
      mem_.push_back(c);
      for (int p = 0; p < m_; ++p)
        col_[static_cast<size_t>(p)] = col_[static_cast<size_t>(p)] << 1 | (c >> p & 1u);
      const bool go_on = rec();
      for (int p = 0; p < m_; ++p) col_[static_cast<size_t>(p)] >>= 1;
      mem_.pop_back();
      if (!go_on) return false;
    }
    return true;
  }
};

inline std::string subset_name(uint32_t mask) {
  std::string s = "{";
  bool first = true;
  for (int p = 0; p < 32; ++p)
    if (mask >> p & 1u) {
      if (!first) s += ",";
      s += std::to_string(p);
      first = false;
    }
  return s + "}";
}

inline JoinSemilattice family_to_semilattice(const std::vector<uint32_t>& family) {
  const int n = static_cast<int>(family.size());
  std::vector<std::string> names;
  for (uint32_t mask : family) names.push_back(subset_name(mask));
  std::vector<Element> table(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const uint32_t u = family[static_cast<size_t>(a)] | family[static_cast<size_t>(b)];
      const auto it = std::lower_bound(family.begin(), family.end(), u);
      table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] =
          static_cast<Element>(it - family.begin());
    }
  return JoinSemilattice(std::move(names), 0, std::move(table));
}

/// Minimal (join table, contact matrix) encoding over all relabelings that
/// fix the zero element. Two structures are isomorphic exactly when their
/// keys coincide.
inline std::vector<int> canonical_key(const ContactSemilattice& cs) {
  const int n = cs.size();
  std::vector<Element> perm(static_cast<size_t>(n)), inv(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  std::vector<int> best, enc;
  do {
    for (int i = 0; i < n; ++i) inv[static_cast<size_t>(perm[static_cast<size_t>(i)])] = i;
    enc.clear();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        enc.push_back(perm[static_cast<size_t>(
            cs.lattice.join(inv[static_cast<size_t>(a)], inv[static_cast<size_t>(b)]))]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        enc.push_back(cs.delta(inv[static_cast<size_t>(a)], inv[static_cast<size_t>(b)]) ? 1 : 0);
    if (best.empty() || enc < best) best = enc;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

}  // namespace detail

/// Streams every join-semilattice with 0 of size <= max_size, one canonical
/// subset-family realization per family shape, sizes ascending. Duplicates
/// up to isomorphism may appear. The visitor returns false to stop.
inline void enumerate_semilattices(int max_size, int size_cap,
                                   const std::function<bool(const JoinSemilattice&)>& visit) {
  if (max_size > size_cap)
    throw CapExceededError("max size " + std::to_string(max_size) + " exceeds cap " +
                           std::to_string(size_cap));
  for (int m = 1; m <= max_size; ++m) {
    bool keep_going = true;
    std::function<bool(const std::vector<uint32_t>&)> on_family =
        [&](const std::vector<uint32_t>& family) {
          keep_going = visit(detail::family_to_semilattice(family));
          return keep_going;
        };
    detail::FamilyEnumerator(m, on_family).run();
    if (!keep_going) return;
  }
}

/// Streams every weak contact semilattice of size <= max_size: for each
/// semilattice realization, every symmetric relation that contains the
/// overlap relation, avoids 0 and is upward closed in both coordinates --
/// exactly the weak relations -- in ascending order of the bit pattern of
/// added pairs. The visitor returns false to stop. Duplicates up to
/// isomorphism may appear unless prune_iso is set.
inline void enumerate_structures(const EnumerateOptions& opts,
                                 const std::function<bool(const ContactSemilattice&)>& visit) {
  if (opts.max_size > opts.size_cap)
    throw CapExceededError("max size " + std::to_string(opts.max_size) + " exceeds cap " +
                           std::to_string(opts.size_cap));

  std::set<std::vector<int>> seen_classes;  // prune_iso only
  for (int m = 1; m <= opts.max_size; ++m) {
    bool keep_going = true;
    std::function<bool(const std::vector<uint32_t>&)> on_family =
        [&](const std::vector<uint32_t>& family) {
          const JoinSemilattice lattice = detail::family_to_semilattice(family);
          const int n = lattice.size();
          const ContactRelation overlap = overlap_contact(lattice);

          std::vector<std::pair<Element, Element>> pool;
          for (Element i = 1; i < n; ++i)
            for (Element j = i + 1; j < n; ++j)
              if (!overlap.test(i, j)) pool.emplace_back(i, j);
          const int q = static_cast<int>(pool.size());
          if (q > 62)
            throw CapExceededError("relation pool of " + std::to_string(q) +
                                   " pairs is beyond enumeration range");

          // pattern bit t may be set only when every pool pair above
          // pool[t] in the componentwise order is set as well
          std::vector<uint32_t> dominators(static_cast<size_t>(q), 0);
          for (int t = 0; t < q; ++t)
            for (int u = 0; u < q; ++u) {
              const auto [i, j] = pool[static_cast<size_t>(t)];
              const auto [i2, j2] = pool[static_cast<size_t>(u)];
              const bool above = (lattice.leq(i, i2) && lattice.leq(j, j2)) ||
                                 (lattice.leq(i, j2) && lattice.leq(j, i2));
              if (above) dominators[static_cast<size_t>(t)] |= uint32_t{1} << u;
            }

          for (uint64_t pattern = 0; pattern < (uint64_t{1} << q); ++pattern) {
            bool closed = true;
            for (int t = 0; t < q && closed; ++t)
              if (pattern >> t & 1u)
                closed = (pattern & dominators[static_cast<size_t>(t)]) ==
                         dominators[static_cast<size_t>(t)];
            if (!closed) continue;

            ContactRelation rel = overlap;
            for (int t = 0; t < q; ++t)
              if (pattern >> t & 1u)
                rel.set(pool[static_cast<size_t>(t)].first, pool[static_cast<size_t>(t)].second);
            ContactSemilattice cs(lattice, std::move(rel));

            if ((opts.filters & kFilterAdd) && !check_add(cs).pass) continue;
            if ((opts.filters & kFilterD1) && !check_d1(cs).pass) continue;
            if ((opts.filters & kFilterD2) && !check_d2(cs, opts.d2_budget).pass) continue;
            if (opts.prune_iso && !seen_classes.insert(detail::canonical_key(cs)).second)
              continue;
            if (!visit(cs)) {
              keep_going = false;
              return false;
            }
          }
          return true;
        };
    detail::FamilyEnumerator(m, on_family).run();
    if (!keep_going) return;
  }
}

// -- bounded refutation -----------------------------------------------------

enum class Theory { D1, D1D2 };

/// Either a finite countermodel (the sentence is not a universal
/// consequence of the chosen theory) or an explicitly bounded absence.
struct CountermodelResult {
  bool found = false;
  ContactSemilattice model;
  std::vector<Element> assignment;
  int bound = 0;
  long long structures_checked = 0;
};

inline CountermodelResult refute(const Sentence& sentence, Theory theory, int max_size,
                                 int d2_budget = 16) {
  EnumerateOptions opts;
  opts.max_size = max_size;
  opts.size_cap = max_size;  // the caller's bound is the cap
  opts.filters = kFilterWeak | kFilterD1 | (theory == Theory::D1D2 ? kFilterD2 : 0u);
  opts.d2_budget = d2_budget;

  CountermodelResult result;
  result.bound = max_size;
  enumerate_structures(opts, [&](const ContactSemilattice& cs) {
    ++result.structures_checked;
    const EvalResult ev = eval(sentence, cs);
    if (ev.holds) return true;
    // re-check the certificate before returning it
    if (!all_pass(check_weak(cs)) || !check_d1(cs).pass) return true;
    if (theory == Theory::D1D2 && !check_d2(cs, d2_budget).pass) return true;
    if (eval(sentence, cs).holds) return true;
    result.found = true;
    result.model = cs;
    result.assignment = ev.assignment;
    return false;
  });
  return result;
}

}  // namespace csl
