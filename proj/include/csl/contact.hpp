#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "csl/semilattice.hpp"

namespace csl {

struct BudgetExceededError : Error {
  using Error::Error;
};

/// Symmetric boolean matrix over element indices, stored as packed bit rows.
/// Symmetry is enforced at construction; asymmetric input is rejected.
class ContactRelation {
 public:
  ContactRelation() = default;
  explicit ContactRelation(int n)
      : n_(n), stride_((static_cast<size_t>(n) + 63) / 64),
        bits_(static_cast<size_t>(n) * stride_, 0) {}

  static ContactRelation from_matrix(const std::vector<std::vector<bool>>& m) {
    const int n = static_cast<int>(m.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (m[static_cast<size_t>(i)][static_cast<size_t>(j)] !=
            m[static_cast<size_t>(j)][static_cast<size_t>(i)])
          throw ValidationError("contact matrix is not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
    ContactRelation r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (m[static_cast<size_t>(i)][static_cast<size_t>(j)]) r.set(i, j);
    return r;
  }

  int size() const { return n_; }

  bool test(Element a, Element b) const {
    return bits_[static_cast<size_t>(a) * stride_ + static_cast<size_t>(b) / 64] >>
               (static_cast<size_t>(b) % 64) &
           1u;
  }

  /// Adds (a,b) and (b,a).
  void set(Element a, Element b) {
    bits_[static_cast<size_t>(a) * stride_ + static_cast<size_t>(b) / 64] |=
        uint64_t{1} << (static_cast<size_t>(b) % 64);
    bits_[static_cast<size_t>(b) * stride_ + static_cast<size_t>(a) / 64] |=
        uint64_t{1} << (static_cast<size_t>(a) % 64);
  }

  friend bool operator==(const ContactRelation& x, const ContactRelation& y) {
    return x.n_ == y.n_ && x.bits_ == y.bits_;
  }

 private:
  int n_ = 0;
  size_t stride_ = 0;
  std::vector<uint64_t> bits_;
};

/// A join-semilattice paired with a symmetric contact relation. Axiom
/// satisfaction is not an invariant: structures failing individual axioms
/// are first-class values here, the checkers below report on them.
struct ContactSemilattice {
  JoinSemilattice lattice;
  ContactRelation contact;

  ContactSemilattice() = default;
  ContactSemilattice(JoinSemilattice l, ContactRelation c)
      : lattice(std::move(l)), contact(std::move(c)) {
    if (lattice.size() != contact.size())
      throw ValidationError("contact relation dimension does not match semilattice size");
  }

  int size() const { return lattice.size(); }
  bool delta(Element a, Element b) const { return contact.test(a, b); }
};

/// Result of checking one axiom. The witness instantiates the failed
/// condition; for the schema checkers it is accompanied by the pair list
/// and the selector sums in play.
struct AxiomReport {
  std::string axiom;
  bool pass = true;
  std::vector<Element> witness;
  std::vector<std::pair<Element, Element>> pairs;
  std::vector<Element> sums;

  AxiomReport() = default;
  AxiomReport(std::string name) : axiom(std::move(name)) {}
  AxiomReport(std::string name, bool ok, std::vector<Element> w)
      : axiom(std::move(name)), pass(ok), witness(std::move(w)) {}
};

/// The minimal weak contact: a delta b iff some nonzero element lies below
/// both.
inline ContactRelation overlap_contact(const JoinSemilattice& s) {
  const int n = s.size();
  ContactRelation r(n);
  for (Element a = 0; a < n; ++a)
    for (Element b = a; b < n; ++b)
      for (Element x = 0; x < n; ++x)
        if (x != s.zero() && s.leq(x, a) && s.leq(x, b)) {
          r.set(a, b);
          break;
        }
  return r;
}

inline AxiomReport check_sym(const ContactSemilattice& cs) {
  const int n = cs.size();
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (cs.delta(a, b) != cs.delta(b, a)) return {"sym", false, {a, b}};
  return {"sym"};
}

inline AxiomReport check_emp(const ContactSemilattice& cs) {
  const int n = cs.size();
  const Element z = cs.lattice.zero();
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (cs.delta(a, b) && (a == z || b == z)) return {"emp", false, {a, b}};
  return {"emp"};
}

inline AxiomReport check_ext(const ContactSemilattice& cs) {
  const int n = cs.size();
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (!cs.delta(a, b)) continue;
      for (Element a1 = 0; a1 < n; ++a1) {
        if (!cs.lattice.leq(a, a1)) continue;
        for (Element b1 = 0; b1 < n; ++b1)
          if (cs.lattice.leq(b, b1) && !cs.delta(a1, b1)) return {"ext", false, {a, b, a1, b1}};
      }
    }
  return {"ext"};
}

inline AxiomReport check_ref(const ContactSemilattice& cs) {
  for (Element a = 0; a < cs.size(); ++a)
    if (a != cs.lattice.zero() && !cs.delta(a, a)) return {"ref", false, {a}};
  return {"ref"};
}

/// The four weak-contact axioms, reported in the order Sym, Emp, Ext, Ref.
inline std::array<AxiomReport, 4> check_weak(const ContactSemilattice& cs) {
  return {check_sym(cs), check_emp(cs), check_ext(cs), check_ref(cs)};
}

inline bool all_pass(const std::array<AxiomReport, 4>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

/// Additivity: a delta b+c implies a delta b or a delta c.
inline AxiomReport check_add(const ContactSemilattice& cs) {
  const int n = cs.size();
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      for (Element c = 0; c < n; ++c)
        if (cs.delta(a, cs.lattice.join(b, c)) && !cs.delta(a, b) && !cs.delta(a, c))
          return {"add", false, {a, b, c}};
  return {"add"};
}

/// (D1): b <= a+c0 and b <= a+c1 with c0, c1 not in contact force b <= a.
inline AxiomReport check_d1(const ContactSemilattice& cs) {
  const int n = cs.size();
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (cs.lattice.leq(b, a)) continue;
      for (Element c0 = 0; c0 < n; ++c0) {
        if (!cs.lattice.leq(b, cs.lattice.join(a, c0))) continue;
        for (Element c1 = 0; c1 < n; ++c1)
          if (!cs.delta(c0, c1) && cs.lattice.leq(b, cs.lattice.join(a, c1)))
            return {"d1", false, {a, b, c0, c1}};
      }
    }
  return {"d1"};
}

namespace detail {

/// Unordered contact-free pairs of nonzero elements, ascending. Pairs with 0
/// are omitted: selecting 0 from such a pair only shrinks the selector sums,
/// so the instance without the pair is the stronger one. Diagonal pairs
/// (c,c) appear when reflexivity fails.
inline std::vector<std::pair<Element, Element>> unrelated_pool(const ContactSemilattice& cs) {
  std::vector<std::pair<Element, Element>> pool;
  const Element z = cs.lattice.zero();
  for (Element c = 0; c < cs.size(); ++c) {
    if (c == z) continue;
    for (Element d = c; d < cs.size(); ++d)
      if (d != z && !cs.delta(c, d)) pool.emplace_back(c, d);
  }
  return pool;
}

}  // namespace detail

/// (D1+): the n-pair generalization of (D1), checked for all 1 <= n <= max_n
/// over subsets of the contact-free pair pool. Orientation and duplication
/// of pairs add no strength, so subsets decide the schema fragment.
inline AxiomReport check_d1plus(const ContactSemilattice& cs, int max_n) {
  const auto pool = detail::unrelated_pool(cs);
  const int p = static_cast<int>(pool.size());
  const int n = cs.size();
  std::vector<int> idx;

  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (cs.lattice.leq(b, a)) continue;
      for (int k = 1; k <= max_n && k <= p && k <= 30; ++k) {
        // lexicographic k-combinations of pool indices
        idx.assign(static_cast<size_t>(k), 0);
        for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
        while (true) {
          bool all_cover = true;
          std::vector<Element> sums;
          for (uint32_t f = 0; f < (uint32_t{1} << k) && all_cover; ++f) {
            Element sum = a;
            for (int i = 0; i < k; ++i) {
              const auto& pr = pool[static_cast<size_t>(idx[static_cast<size_t>(i)])];
              sum = cs.lattice.join(sum, (f >> i & 1u) ? pr.second : pr.first);
            }
            sums.push_back(sum);
            if (!cs.lattice.leq(b, sum)) all_cover = false;
          }
          if (all_cover) {
            AxiomReport r{"d1plus", false, {a, b}};
            for (int i = 0; i < k; ++i) r.pairs.push_back(pool[static_cast<size_t>(idx[static_cast<size_t>(i)])]);
            r.sums = std::move(sums);
            return r;
          }
          int i = k - 1;
          while (i >= 0 && idx[static_cast<size_t>(i)] == p - k + i) --i;
          if (i < 0) break;
          ++idx[static_cast<size_t>(i)];
          for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        }
      }
    }
  return {"d1plus"};
}

/// (D2), decided for all n at once: it suffices to scan subsets of the
/// unordered contact-free pair pool, because duplicated pairs and swapped
/// orientations only enlarge the selector-sum set, giving an instance that
/// is implied by the deduplicated one. The empty subset yields the empty
/// sum 0 and reduces to (Emp). Aborts when the pool exceeds the budget;
/// the scan is Theta(size^2 * 3^pool).
inline AxiomReport check_d2(const ContactSemilattice& cs, int budget = 16) {
  const auto pool = detail::unrelated_pool(cs);
  const int p = static_cast<int>(pool.size());
  if (p > budget || p > 30)
    throw BudgetExceededError("d2 pair pool " + std::to_string(p) + " exceeds budget " +
                              std::to_string(std::min(budget, 30)));
  const int n = cs.size();

  std::vector<Element> sums;
  std::vector<int> members;
  for (uint32_t pattern = 0; pattern < (uint32_t{1} << p); ++pattern) {
    members.clear();
    for (int i = 0; i < p; ++i)
      if (pattern >> i & 1u) members.push_back(i);
    const int k = static_cast<int>(members.size());

    sums.clear();
    for (uint32_t f = 0; f < (uint32_t{1} << k); ++f) {
      Element sum = cs.lattice.zero();
      for (int i = 0; i < k; ++i) {
        const auto& pr = pool[static_cast<size_t>(members[static_cast<size_t>(i)])];
        sum = cs.lattice.join(sum, (f >> i & 1u) ? pr.second : pr.first);
      }
      sums.push_back(sum);
    }
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) {
        if (!cs.delta(a, b)) continue;
        bool covered = true;
        for (Element s : sums)
          if (!cs.lattice.leq(a, s) && !cs.lattice.leq(b, s)) {
            covered = false;
            break;
          }
        if (covered) {
          AxiomReport r{"d2", false, {a, b}};
          for (int i : members) r.pairs.push_back(pool[static_cast<size_t>(i)]);
          r.sums = sums;
          return r;
        }
      }
  }
  return {"d2"};
}

/// Verification of an injective 0- and join-preserving map between contact
/// semilattices that preserves and reflects contact.
struct EmbeddingCheck {
  bool zero_ok = true;
  bool joins_ok = true;
  bool injective_ok = true;
  bool contact_ok = true;
  std::vector<Element> witness;
  bool pass() const { return zero_ok && joins_ok && injective_ok && contact_ok; }
};

inline EmbeddingCheck verify_semilattice_embedding(const ContactSemilattice& src,
                                                   const ContactSemilattice& dst,
                                                   const std::vector<Element>& map) {
  EmbeddingCheck r;
  const int n = src.size();
  if (map[static_cast<size_t>(src.lattice.zero())] != dst.lattice.zero()) {
    r.zero_ok = false;
    r.witness = {src.lattice.zero()};
    return r;
  }
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (map[static_cast<size_t>(src.lattice.join(a, b))] !=
          dst.lattice.join(map[static_cast<size_t>(a)], map[static_cast<size_t>(b)])) {
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
      if (src.delta(a, b) != dst.delta(map[static_cast<size_t>(a)], map[static_cast<size_t>(b)])) {
        r.contact_ok = false;
        r.witness = {a, b};
        return r;
      }
  return r;
}

}  // namespace csl
