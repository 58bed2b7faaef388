#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "csl/contact.hpp"
#include "csl/semilattice.hpp"

namespace csl {

struct TooLargeError : Error {
  using Error::Error;
};

struct NoTopElementError : Error {
  using Error::Error;
};

/// Full powerset Boolean algebra over a finite base, carrying either the
/// overlap contact or the contact generated by a list of subset pairs.
/// Elements are bit masks; the 2^base_size subsets are implicit.
struct PowersetContactAlgebra {
  enum class Kind { Overlap, Generated };

  int base_size = 0;
  Kind kind = Kind::Overlap;
  std::vector<std::pair<uint64_t, uint64_t>> pairs;  // Generated only
  std::vector<std::string> base_labels;

  bool contact(uint64_t x, uint64_t y) const {
    if (x & y) return true;
    if (kind == Kind::Overlap) return false;
    for (const auto& [u, v] : pairs)
      if (((u & x) == u && (v & y) == v) || ((v & x) == v && (u & y) == u)) return true;
    return false;
  }
};

struct EmbeddingReport {
  bool zero_ok = true;
  bool joins_ok = true;
  bool injective_ok = true;
  bool contact_ok = true;
  std::vector<Element> witness;
  bool pass() const { return zero_ok && joins_ok && injective_ok && contact_ok; }
};

/// An element map into a powerset algebra together with its verification.
struct EmbeddingWitness {
  ContactSemilattice source;
  PowersetContactAlgebra target;
  std::vector<uint64_t> map;  // source element -> subset of the target base
  EmbeddingReport report;
};

struct PreconditionFailed {
  AxiomReport report;
};

struct Indeterminate {
  std::string reason;
};

using EmbedResult = std::variant<EmbeddingWitness, PreconditionFailed, Indeterminate>;

/// Base of the representation map: every element, or every element except
/// the top in bounded mode (where homomorphisms must preserve the maximum).
inline std::vector<Element> phi_base(const JoinSemilattice& s, bool bounded) {
  std::vector<Element> base;
  Element skip = -1;
  if (bounded) {
    auto t = s.top();
    if (!t) throw NoTopElementError("bounded mode requires a maximum element");
    skip = *t;
  }
  for (Element x = 0; x < s.size(); ++x)
    if (x != skip) base.push_back(x);
  return base;
}

/// phi(a) = the set of base elements x with a not below x. Preserves joins,
/// reflects order, and sends 0 to the empty set.
inline uint64_t phi(const JoinSemilattice& s, Element a, bool bounded = false) {
  const auto base = phi_base(s, bounded);
  if (base.size() > 64) throw TooLargeError("representation base exceeds 64 elements");
  uint64_t mask = 0;
  for (size_t i = 0; i < base.size(); ++i)
    if (!s.leq(a, base[i])) mask |= uint64_t{1} << i;
  return mask;
}

/// The quotient construction shared by both embeddings, preconditions
/// aside. In a powerset algebra the ideal generated by the sets
/// phi(c) & phi(d), for contact-free pairs (c,d), is the down-set of their
/// union U, so the quotient is the powerset of base minus U and the map is
/// kappa(a) = phi(a) minus U, repacked onto the surviving coordinates.
struct QuotientShortcut {
  std::vector<Element> phi_base_elements;  // base of phi, in element order
  uint64_t removed = 0;                    // U as a mask over that base
  std::vector<Element> surviving;          // base elements left after the quotient
  std::vector<uint64_t> kappa;             // source element -> repacked subset
  std::vector<uint64_t> phi_masks;         // phi(a) over the unquotiented base
};

inline QuotientShortcut quotient_shortcut(const ContactSemilattice& cs, bool bounded = false) {
  QuotientShortcut q;
  q.phi_base_elements = phi_base(cs.lattice, bounded);
  const size_t b = q.phi_base_elements.size();
  if (b > 64) throw TooLargeError("representation base exceeds 64 elements");

  const int n = cs.size();
  q.phi_masks.resize(static_cast<size_t>(n));
  for (Element a = 0; a < n; ++a) {
    uint64_t mask = 0;
    for (size_t i = 0; i < b; ++i)
      if (!cs.lattice.leq(a, q.phi_base_elements[i])) mask |= uint64_t{1} << i;
    q.phi_masks[static_cast<size_t>(a)] = mask;
  }

  for (Element c = 0; c < n; ++c)
    for (Element d = c; d < n; ++d)
      if (!cs.delta(c, d))
        q.removed |= q.phi_masks[static_cast<size_t>(c)] & q.phi_masks[static_cast<size_t>(d)];

  std::vector<int> packed(b, -1);
  int next = 0;
  for (size_t i = 0; i < b; ++i)
    if (!(q.removed >> i & 1u)) {
      packed[i] = next++;
      q.surviving.push_back(q.phi_base_elements[i]);
    }

  q.kappa.resize(static_cast<size_t>(n));
  for (Element a = 0; a < n; ++a) {
    uint64_t mask = 0;
    for (size_t i = 0; i < b; ++i)
      if ((q.phi_masks[static_cast<size_t>(a)] >> i & 1u) && packed[i] >= 0)
        mask |= uint64_t{1} << packed[i];
    q.kappa[static_cast<size_t>(a)] = mask;
  }
  return q;
}

/// Independent re-check of the witness contract: kappa(0) is empty, joins
/// map to unions, the map is injective, and contact holds in the source
/// exactly when it holds between the images.
inline EmbeddingReport verify_embedding(const ContactSemilattice& src,
                                        const PowersetContactAlgebra& target,
                                        const std::vector<uint64_t>& map) {
  EmbeddingReport r;
  const int n = src.size();
  if (map[static_cast<size_t>(src.lattice.zero())] != 0) {
    r.zero_ok = false;
    r.witness = {src.lattice.zero()};
    return r;
  }
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (map[static_cast<size_t>(src.lattice.join(a, b))] !=
          (map[static_cast<size_t>(a)] | map[static_cast<size_t>(b)])) {
        r.joins_ok = false;
        r.witness = {a, b};
        return r;
      }
  for (Element a = 0; a < n; ++a)
    for (Element b = a + 1; b < n; ++b)
      if (map[static_cast<size_t>(a)] == map[static_cast<size_t>(b)]) {
        r.injective_ok = false;
        r.witness = {a, b};
        return r;
      }
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (src.delta(a, b) !=
          target.contact(map[static_cast<size_t>(a)], map[static_cast<size_t>(b)])) {
        r.contact_ok = false;
        r.witness = {a, b};
        return r;
      }
  return r;
}

inline EmbeddingReport verify_embedding(const EmbeddingWitness& w) {
  return verify_embedding(w.source, w.target, w.map);
}

namespace detail {

inline std::vector<std::string> surviving_labels(const ContactSemilattice& cs,
                                                 const QuotientShortcut& q) {
  std::vector<std::string> labels;
  for (Element x : q.surviving) labels.push_back(cs.lattice.name(x));
  return labels;
}

}  // namespace detail

/// Embedding into a powerset algebra with overlap contact. Requires the
/// weak axioms plus (D1) and (D2); the failing checker report is returned
/// otherwise. A blown (D2) budget yields Indeterminate: no unverified
/// certificate is ever emitted. The finite target is simultaneously a
/// complete atomic Boolean algebra.
inline EmbedResult overlap_embed(const ContactSemilattice& cs, bool bounded = false,
                                 int d2_budget = 16) {
  for (const auto& rep : check_weak(cs))
    if (!rep.pass) return PreconditionFailed{rep};
  if (auto rep = check_d1(cs); !rep.pass) return PreconditionFailed{rep};
  try {
    if (auto rep = check_d2(cs, d2_budget); !rep.pass) return PreconditionFailed{rep};
  } catch (const BudgetExceededError& e) {
    return Indeterminate{e.what()};
  }

  const auto q = quotient_shortcut(cs, bounded);
  EmbeddingWitness w;
  w.source = cs;
  w.target.base_size = static_cast<int>(q.surviving.size());
  w.target.kind = PowersetContactAlgebra::Kind::Overlap;
  w.target.base_labels = detail::surviving_labels(cs, q);
  w.map = q.kappa;
  w.report = verify_embedding(w);
  return w;
}

/// Embedding into a powerset algebra with a generated weak contact.
/// Requires the weak axioms plus (D1) only. The generating pairs are the
/// images of source contacts, pruned of pairs dominated componentwise by
/// another pair (the defining condition is monotone in the pair).
inline EmbedResult weak_embed(const ContactSemilattice& cs, bool bounded = false) {
  for (const auto& rep : check_weak(cs))
    if (!rep.pass) return PreconditionFailed{rep};
  if (auto rep = check_d1(cs); !rep.pass) return PreconditionFailed{rep};

  const auto q = quotient_shortcut(cs, bounded);
  EmbeddingWitness w;
  w.source = cs;
  w.target.base_size = static_cast<int>(q.surviving.size());
  w.target.kind = PowersetContactAlgebra::Kind::Generated;
  w.target.base_labels = detail::surviving_labels(cs, q);
  w.map = q.kappa;

  const int n = cs.size();
  std::vector<std::pair<uint64_t, uint64_t>> pairs;
  for (Element a = 0; a < n; ++a)
    for (Element b = a; b < n; ++b)
      if (cs.delta(a, b)) {
        uint64_t u = q.kappa[static_cast<size_t>(a)], v = q.kappa[static_cast<size_t>(b)];
        if (u > v) std::swap(u, v);
        pairs.emplace_back(u, v);
      }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<std::pair<uint64_t, uint64_t>> kept;
  for (const auto& p : pairs) {
    bool dominated = false;
    for (const auto& o : pairs) {
      if (o == p) continue;
      if (((o.first & p.first) == o.first && (o.second & p.second) == o.second) ||
          ((o.second & p.first) == o.second && (o.first & p.second) == o.first)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(p);
  }
  w.target.pairs = std::move(kept);
  w.report = verify_embedding(w);
  return w;
}

/// Brute-force mirror of the quotient: materializes the whole powerset of
/// the source, forms equivalence classes x ~ y iff their symmetric
/// difference lies under U, and maps each element to the class of phi(a).
/// Used to validate the shortcut; must agree with it up to dropping the
/// U-coordinates.
struct BruteQuotient {
  uint64_t removed = 0;                 // U over the full base
  std::vector<uint64_t> class_reps;     // one representative mask per class
  std::vector<int> kappa_class;        // source element -> class index
  long long class_count = 0;
};

inline BruteQuotient brute_quotient_oracle(const ContactSemilattice& cs, int max_elements = 12) {
  const int n = cs.size();
  if (n > max_elements)
    throw TooLargeError("brute quotient oracle: " + std::to_string(n) + " elements exceeds cap " +
                        std::to_string(max_elements));

  std::vector<uint64_t> phi_masks(static_cast<size_t>(n));
  for (Element a = 0; a < n; ++a) {
    uint64_t mask = 0;
    for (Element x = 0; x < n; ++x)
      if (!cs.lattice.leq(a, x)) mask |= uint64_t{1} << x;
    phi_masks[static_cast<size_t>(a)] = mask;
  }

  BruteQuotient q;
  for (Element c = 0; c < n; ++c)
    for (Element d = c; d < n; ++d)
      if (!cs.delta(c, d))
        q.removed |= phi_masks[static_cast<size_t>(c)] & phi_masks[static_cast<size_t>(d)];

  // classes formed extensionally from the equivalence test alone
  const uint64_t total = uint64_t{1} << n;
  std::vector<int> class_of(total, -1);
  for (uint64_t x = 0; x < total; ++x) {
    for (size_t k = 0; k < q.class_reps.size(); ++k)
      if (((x ^ q.class_reps[k]) & ~q.removed) == 0) {
        class_of[x] = static_cast<int>(k);
        break;
      }
    if (class_of[x] < 0) {
      class_of[x] = static_cast<int>(q.class_reps.size());
      q.class_reps.push_back(x);
    }
  }
  q.class_count = static_cast<long long>(q.class_reps.size());
  for (Element a = 0; a < n; ++a)
    q.kappa_class.push_back(class_of[phi_masks[static_cast<size_t>(a)]]);
  return q;
}

/// Agreement between the oracle and the shortcut under the canonical
/// isomorphism that drops the removed coordinates.
inline bool oracle_matches_shortcut(const BruteQuotient& oracle, const QuotientShortcut& q) {
  if (oracle.class_count != (1ll << q.surviving.size())) return false;
  std::vector<int> packed(64, -1);
  int next = 0;
  for (int i = 0; i < 64; ++i)
    if (!(oracle.removed >> i & 1u)) packed[static_cast<size_t>(i)] = next++;
  for (size_t a = 0; a < q.kappa.size(); ++a) {
    const uint64_t rep = oracle.class_reps[static_cast<size_t>(oracle.kappa_class[a])];
    uint64_t repacked = 0;
    for (int i = 0; i < 64; ++i)
      if ((rep >> i & 1u) && !(oracle.removed >> i & 1u))
        repacked |= uint64_t{1} << packed[static_cast<size_t>(i)];
    if (repacked != q.kappa[a]) return false;
  }
  return true;
}

}  // namespace csl
