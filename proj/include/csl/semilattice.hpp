#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csl {

using Element = int;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct BaseTooLargeError : Error {
  using Error::Error;
};

struct NoUniqueJoinError : Error {
  Element a = -1, b = -1;
  NoUniqueJoinError(const std::string& msg, Element a_, Element b_) : Error(msg), a(a_), b(b_) {}
};

/// One algebraic law failing at a concrete witness.
struct LawViolation {
  enum class Law { Commutativity, Associativity, Idempotence, ZeroNeutrality };
  Law law;
  std::array<Element, 3> witness{-1, -1, -1};
  int arity = 0;  // how many witness slots are meaningful
};

inline const char* law_name(LawViolation::Law law) {
  switch (law) {
    case LawViolation::Law::Commutativity: return "commutativity";
    case LawViolation::Law::Associativity: return "associativity";
    case LawViolation::Law::Idempotence: return "idempotence";
    case LawViolation::Law::ZeroNeutrality: return "zero-neutrality";
  }
  return "?";
}

/// Finite join-semilattice with a least element. Elements are dense indices
/// 0..size-1; names are metadata only. The join table is stored in full so
/// lookups stay constant-time inside exponential search loops.
class JoinSemilattice {
 public:
  JoinSemilattice() = default;
  JoinSemilattice(std::vector<std::string> names, Element zero, std::vector<Element> table)
      : names_(std::move(names)), zero_(zero), table_(std::move(table)) {}

  int size() const { return static_cast<int>(names_.size()); }
  Element zero() const { return zero_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Element a) const { return names_[static_cast<size_t>(a)]; }

  Element join(Element a, Element b) const {
    return table_[static_cast<size_t>(a) * names_.size() + static_cast<size_t>(b)];
  }

  /// Derived order: a <= b iff a+b = b.
  bool leq(Element a, Element b) const { return join(a, b) == b; }

  /// The maximum element, when one exists.
  std::optional<Element> top() const {
    for (Element t = 0; t < size(); ++t) {
      bool is_top = true;
      for (Element a = 0; a < size() && is_top; ++a) is_top = leq(a, t);
      if (is_top) return t;
    }
    return std::nullopt;
  }

  const std::vector<Element>& table() const { return table_; }

  friend bool operator==(const JoinSemilattice& x, const JoinSemilattice& y) {
    return x.names_ == y.names_ && x.zero_ == y.zero_ && x.table_ == y.table_;
  }

 private:
  std::vector<std::string> names_;
  Element zero_ = 0;
  std::vector<Element> table_;
};

struct SemilatticeResult {
  std::optional<JoinSemilattice> value;
  std::vector<LawViolation> violations;
  bool ok() const { return value.has_value(); }
};

/// Checks the semilattice laws on a raw join table. On failure returns one
/// violation per broken law, each with the first witness in index order.
inline SemilatticeResult validate_semilattice(std::vector<std::string> names, Element zero,
                                              std::vector<Element> table) {
  const int n = static_cast<int>(names.size());
  if (n <= 0) throw ValidationError("empty element list");
  if (zero < 0 || zero >= n) throw ValidationError("zero index out of range");
  if (table.size() != static_cast<size_t>(n) * static_cast<size_t>(n))
    throw ValidationError("join table must be size*size");
  for (Element v : table)
    if (v < 0 || v >= n) throw ValidationError("join table entry out of range");
  for (size_t i = 0; i + 1 < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw ValidationError("duplicate element name: " + names[i]);

  auto jn = [&](Element a, Element b) {
    return table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)];
  };

  std::vector<LawViolation> out;
  for (Element a = 0; a < n; ++a)
    if (jn(a, a) != a) {
      out.push_back({LawViolation::Law::Idempotence, {a, -1, -1}, 1});
      break;
    }
  for (Element a = 0; a < n && out.size() < 2; ++a) {
    bool done = false;
    for (Element b = 0; b < n && !done; ++b)
      if (jn(a, b) != jn(b, a)) {
        out.push_back({LawViolation::Law::Commutativity, {a, b, -1}, 2});
        done = true;
      }
    if (done) break;
  }
  {
    bool done = false;
    for (Element a = 0; a < n && !done; ++a)
      for (Element b = 0; b < n && !done; ++b)
        for (Element c = 0; c < n && !done; ++c)
          if (jn(a, jn(b, c)) != jn(jn(a, b), c)) {
            out.push_back({LawViolation::Law::Associativity, {a, b, c}, 3});
            done = true;
          }
  }
  for (Element a = 0; a < n; ++a)
    if (jn(zero, a) != a) {
      out.push_back({LawViolation::Law::ZeroNeutrality, {a, -1, -1}, 1});
      break;
    }

  if (!out.empty()) return {std::nullopt, std::move(out)};
  return {JoinSemilattice(std::move(names), zero, std::move(table)), {}};
}

/// Same, but throws a formatted ValidationError instead of returning reports.
inline JoinSemilattice make_semilattice(std::vector<std::string> names, Element zero,
                                        std::vector<Element> table) {
  auto r = validate_semilattice(names, zero, std::move(table));
  if (!r.ok()) {
    std::string msg = "semilattice laws violated:";
    for (const auto& v : r.violations) {
      msg += " ";
      msg += law_name(v.law);
      msg += "(";
      for (int i = 0; i < v.arity; ++i) {
        if (i) msg += ",";
        msg += names[static_cast<size_t>(v.witness[static_cast<size_t>(i)])];
      }
      msg += ")";
    }
    throw ValidationError(msg);
  }
  return std::move(*r.value);
}

/// Join table induced by a reflexive-transitive order relation: join = least
/// upper bound. Rejects pairs without a unique least upper bound.
inline std::vector<Element> join_table_from_order(const std::vector<std::vector<bool>>& leq,
                                                  const std::vector<std::string>* names = nullptr) {
  const int n = static_cast<int>(leq.size());
  auto nm = [&](Element a) {
    return names ? (*names)[static_cast<size_t>(a)] : std::to_string(a);
  };
  std::vector<Element> table(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      Element least = -1;
      for (Element u = 0; u < n; ++u) {
        if (!(leq[a][u] && leq[b][u])) continue;
        if (least == -1 || leq[u][least]) least = u;
      }
      if (least == -1)
        throw NoUniqueJoinError("no upper bound for " + nm(a) + ", " + nm(b), a, b);
      for (Element u = 0; u < n; ++u)
        if (leq[a][u] && leq[b][u] && !leq[least][u])
          throw NoUniqueJoinError("no unique least upper bound for " + nm(a) + ", " + nm(b), a, b);
      table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] = least;
    }
  return table;
}

/// Greatest-lower-bound table. In a finite join-semilattice with 0 the meet
/// of a,b is the join of all common lower bounds: that join is itself a
/// common lower bound because joins of elements below a stay below a.
inline std::vector<Element> meets(const JoinSemilattice& s) {
  const int n = s.size();
  std::vector<Element> table(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      Element m = s.zero();
      for (Element x = 0; x < n; ++x)
        if (s.leq(x, a) && s.leq(x, b)) m = s.join(m, x);
      table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] = m;
    }
  return table;
}

struct DistributivityReport {
  bool distributive = true;
  std::array<Element, 3> witness{-1, -1, -1};
};

/// Tests meet-over-join distributivity on all triples; the witness is the
/// first failing triple in index order.
inline DistributivityReport is_distributive(const JoinSemilattice& s) {
  const int n = s.size();
  const auto meet_table = meets(s);
  auto meet = [&](Element a, Element b) {
    return meet_table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)];
  };
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      for (Element c = 0; c < n; ++c)
        if (meet(a, s.join(b, c)) != s.join(meet(a, b), meet(a, c)))
          return {false, {a, b, c}};
  return {};
}

/// The powerset of a k-element base as a join-semilattice: elements are the
/// 2^k subsets in mask order, join is union. Memory grows as 4^k.
inline JoinSemilattice powerset_algebra(int base_size, int cap = 20) {
  if (base_size < 0) throw BaseTooLargeError("base size must be nonnegative");
  if (base_size > cap)
    throw BaseTooLargeError("base size " + std::to_string(base_size) + " exceeds cap " +
                            std::to_string(cap));
  const size_t n = size_t{1} << base_size;
  std::vector<std::string> names(n);
  for (size_t m = 0; m < n; ++m) {
    std::string s(static_cast<size_t>(base_size), '0');
    for (int i = 0; i < base_size; ++i)
      if (m & (size_t{1} << i)) s[static_cast<size_t>(i)] = '1';
    names[m] = base_size == 0 ? "0" : s;
  }
  std::vector<Element> table(n * n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) table[a * n + b] = static_cast<Element>(a | b);
  return JoinSemilattice(std::move(names), 0, std::move(table));
}

}  // namespace csl
