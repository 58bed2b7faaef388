#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csl/contact.hpp"
#include "csl/semilattice.hpp"

namespace csl {

struct UnknownFixtureError : Error {
  using Error::Error;
};

namespace detail {

/// M3: bottom, three atoms, top. Atom c is listed first so that checker
/// witnesses surface the special atom.
inline JoinSemilattice m3_lattice() {
  const std::vector<std::string> names{"0", "c", "a", "b", "1"};
  const int n = 5;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    leq[static_cast<size_t>(i)][static_cast<size_t>(i)] = true;
    leq[0][static_cast<size_t>(i)] = true;
    leq[static_cast<size_t>(i)][4] = true;
  }
  return make_semilattice(names, 0, join_table_from_order(leq, &names));
}

inline ContactRelation full_nonzero_contact(const JoinSemilattice& s) {
  ContactRelation r(s.size());
  for (Element a = 0; a < s.size(); ++a)
    for (Element b = a; b < s.size(); ++b)
      if (a != s.zero() && b != s.zero()) r.set(a, b);
  return r;
}

}  // namespace detail

/// -- the free semilattice on c,d,e,f,x,y with the absorption relations --
///
/// Normal form: a subset of {x,y} plus a subset of {c,d,e,f}, where x is
/// absorbed by any of {c,e}, {d,f}, {c,d}, {e,f} and y by any of {c,f},
/// {d,e}, {c,d}, {e,f}.
struct FreeDElement {
  unsigned extra = 0;  // bit 0 = x, bit 1 = y
  unsigned base = 0;   // bits 0..3 = c,d,e,f

  friend bool operator==(const FreeDElement& l, const FreeDElement& r) {
    return l.extra == r.extra && l.base == r.base;
  }
  friend bool operator<(const FreeDElement& l, const FreeDElement& r) {
    return l.extra != r.extra ? l.extra < r.extra : l.base < r.base;
  }
};

namespace detail {

constexpr unsigned kFreeDXAbsorbers[] = {0b0101, 0b1010, 0b0011, 0b1100};  // ce, df, cd, ef
constexpr unsigned kFreeDYAbsorbers[] = {0b1001, 0b0110, 0b0011, 0b1100};  // cf, de, cd, ef

inline bool freed_base_absorbs_x(unsigned base) {
  for (unsigned m : kFreeDXAbsorbers)
    if ((base & m) == m) return true;
  return false;
}

inline bool freed_base_absorbs_y(unsigned base) {
  for (unsigned m : kFreeDYAbsorbers)
    if ((base & m) == m) return true;
  return false;
}

inline FreeDElement freed_reduce(FreeDElement e) {
  if (freed_base_absorbs_x(e.base)) e.extra &= ~1u;
  if (freed_base_absorbs_y(e.base)) e.extra &= ~2u;
  return e;
}

inline FreeDElement freed_join(FreeDElement l, FreeDElement r) {
  return freed_reduce({l.extra | r.extra, l.base | r.base});
}

inline std::string freed_name(FreeDElement e) {
  if (e.extra == 0 && e.base == 0) return "0";
  static const char* extras[] = {"x", "y"};
  static const char* bases[] = {"c", "d", "e", "f"};
  std::string s;
  for (int i = 0; i < 2; ++i)
    if (e.extra & (1u << i)) {
      if (!s.empty()) s += "+";
      s += extras[i];
    }
  for (int i = 0; i < 4; ++i)
    if (e.base & (1u << i)) {
      if (!s.empty()) s += "+";
      s += bases[i];
    }
  return s;
}

}  // namespace detail

/// All normal forms, in (extra, base) order. Index 0 is the empty sum.
inline std::vector<FreeDElement> free_d_elements() {
  std::vector<FreeDElement> out;
  for (unsigned extra = 0; extra < 4; ++extra)
    for (unsigned base = 0; base < 16; ++base) {
      FreeDElement e{extra, base};
      if (detail::freed_reduce(e) == e) out.push_back(e);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Order oracle from the closed-form criterion: w+b <= z+a iff b <= a as
/// generator sets and every extra variable of the left side missing on the
/// right is absorbed by the right's generator set.
inline bool free_d_leq_oracle(FreeDElement lhs, FreeDElement rhs) {
  if ((lhs.base & rhs.base) != lhs.base) return false;
  unsigned missing = lhs.extra & ~rhs.extra;
  if ((missing & 1u) && !detail::freed_base_absorbs_x(rhs.base)) return false;
  if ((missing & 2u) && !detail::freed_base_absorbs_y(rhs.base)) return false;
  return true;
}

namespace detail {

inline ContactSemilattice make_free_d() {
  const auto elems = free_d_elements();
  const int n = static_cast<int>(elems.size());
  std::map<std::pair<unsigned, unsigned>, Element> index;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    index[{elems[static_cast<size_t>(i)].extra, elems[static_cast<size_t>(i)].base}] = i;
    names.push_back(freed_name(elems[static_cast<size_t>(i)]));
  }
  std::vector<Element> table(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      FreeDElement j = freed_join(elems[static_cast<size_t>(a)], elems[static_cast<size_t>(b)]);
      table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] =
          index.at({j.extra, j.base});
    }
  auto lattice = make_semilattice(names, 0, std::move(table));

  // c and d never touch, e and f never touch, everything else nonzero does.
  ContactRelation contact = full_nonzero_contact(lattice);
  ContactRelation pruned(n);
  const Element c = index.at({0, 1}), d = index.at({0, 2});
  const Element e = index.at({0, 4}), f = index.at({0, 8});
  for (Element a = 0; a < n; ++a)
    for (Element b = a; b < n; ++b) {
      if (!contact.test(a, b)) continue;
      if ((a == c && b == d) || (a == d && b == c)) continue;
      if ((a == e && b == f) || (a == f && b == e)) continue;
      pruned.set(a, b);
    }
  return {std::move(lattice), std::move(pruned)};
}

// -- subgroup lattice of Z4 x Z4 --

inline uint8_t z16_add(uint8_t g, uint8_t h) {
  return static_cast<uint8_t>(((((g >> 2) + (h >> 2)) & 3) << 2) | (((g & 3) + (h & 3)) & 3));
}

/// Subgroups as 16-bit element masks, via filtering all subsets containing
/// the identity for closure under addition.
inline std::vector<uint16_t> z4z4_subgroups_by_subset_filter() {
  std::vector<uint16_t> out;
  for (uint32_t m = 1; m < (1u << 16); m += 2) {  // bit 0 = identity, always present
    bool closed = true;
    for (int g = 0; g < 16 && closed; ++g) {
      if (!(m >> g & 1u)) continue;
      for (int h = g; h < 16 && closed; ++h) {
        if (!(m >> h & 1u)) continue;
        if (!(m >> z16_add(static_cast<uint8_t>(g), static_cast<uint8_t>(h)) & 1u)) closed = false;
      }
    }
    if (closed) out.push_back(static_cast<uint16_t>(m));
  }
  std::sort(out.begin(), out.end(), [](uint16_t a, uint16_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

inline uint16_t z4z4_closure(uint16_t seed) {
  uint16_t cur = seed | 1u;
  while (true) {
    uint16_t next = cur;
    for (int g = 0; g < 16; ++g) {
      if (!(cur >> g & 1u)) continue;
      for (int h = g; h < 16; ++h)
        if (cur >> h & 1u)
          next = static_cast<uint16_t>(
              next | (1u << z16_add(static_cast<uint8_t>(g), static_cast<uint8_t>(h))));
    }
    if (next == cur) return cur;
    cur = next;
  }
}

/// Independent enumeration: closures of all one- and two-generator seeds.
/// Z4 x Z4 has rank 2, so this reaches every subgroup.
inline std::vector<uint16_t> z4z4_subgroups_by_generators() {
  std::vector<uint16_t> out;
  out.push_back(1);  // trivial subgroup
  for (int g = 0; g < 16; ++g)
    for (int h = g; h < 16; ++h)
      out.push_back(z4z4_closure(static_cast<uint16_t>(1u << g | 1u << h)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::sort(out.begin(), out.end(), [](uint16_t a, uint16_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

inline std::string z4z4_name(uint16_t subgroup) {
  std::string s = "{";
  bool first = true;
  for (int g = 0; g < 16; ++g)
    if (subgroup >> g & 1u) {
      if (!first) s += ",";
      s += static_cast<char>('0' + (g >> 2));
      s += static_cast<char>('0' + (g & 3));
      first = false;
    }
  s += "}";
  return s;
}

inline ContactSemilattice make_z4z4() {
  const auto subs = z4z4_subgroups_by_subset_filter();
  const int n = static_cast<int>(subs.size());
  std::map<uint16_t, Element> index;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    index[subs[static_cast<size_t>(i)]] = i;
    names.push_back(z4z4_name(subs[static_cast<size_t>(i)]));
  }
  std::vector<Element> table(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      table[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] = index.at(
          z4z4_closure(static_cast<uint16_t>(subs[static_cast<size_t>(a)] | subs[static_cast<size_t>(b)])));
  auto lattice = make_semilattice(names, 0, std::move(table));

  // overlap: subgroups touch iff their intersection is nontrivial
  ContactRelation contact(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      if ((subs[static_cast<size_t>(a)] & subs[static_cast<size_t>(b)]) != 1u) contact.set(a, b);
  return {std::move(lattice), std::move(contact)};
}

}  // namespace detail

/// Named example structures. They are built, not transcribed: free_d comes
/// from the join closure of its generators under the absorption rules,
/// z4z4 from brute-force subgroup enumeration.
inline ContactSemilattice fixture(const std::string& name) {
  if (name == "m3_overlap") {
    auto l = detail::m3_lattice();
    auto c = overlap_contact(l);
    return {std::move(l), std::move(c)};
  }
  if (name == "m3_partial") {
    auto l = detail::m3_lattice();
    auto c = overlap_contact(l);
    c.set(2, 3);  // a delta b
    return {std::move(l), std::move(c)};
  }
  if (name == "m3_delta") {
    auto l = detail::m3_lattice();
    auto c = overlap_contact(l);
    c.set(2, 3);  // a delta b
    c.set(2, 1);  // a delta c
    return {std::move(l), std::move(c)};
  }
  if (name == "b8") {
    auto l = powerset_algebra(3);
    std::vector<std::string> names{"0", "a", "b", "a+b", "c", "a+c", "b+c", "1"};
    l = JoinSemilattice(std::move(names), 0, l.table());
    // all nonzero pairs in contact except {a,c} and {b,c}
    ContactRelation c = detail::full_nonzero_contact(l);
    ContactRelation pruned(8);
    for (Element i = 1; i < 8; ++i)
      for (Element j = i; j < 8; ++j) {
        if ((i == 1 && j == 4) || (i == 2 && j == 4)) continue;
        pruned.set(i, j);
      }
    return {std::move(l), std::move(pruned)};
  }
  if (name == "free_d") return detail::make_free_d();
  if (name == "z4z4") return detail::make_z4z4();
  throw UnknownFixtureError("unknown fixture: " + name);
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"m3_overlap", "m3_partial", "m3_delta",
                                              "b8",         "free_d",     "z4z4"};
  return names;
}

/// Construction notes worth surfacing next to the structure itself.
inline std::vector<std::string> fixture_notes(const std::string& name) {
  if (name == "free_d") {
    const auto count = free_d_elements().size();
    return {"join closure yields " + std::to_string(count) + " elements",
            "the bare sum x+y is irreducible under the absorption rules and is a member, "
            "although explicit 34-element listings of this semilattice omit it"};
  }
  if (name == "z4z4")
    return {"subgroups enumerated by subset filtering; " +
            std::to_string(detail::z4z4_subgroups_by_subset_filter().size()) + " subgroups"};
  if (fixture_names().end() ==
      std::find(fixture_names().begin(), fixture_names().end(), name))
    throw UnknownFixtureError("unknown fixture: " + name);
  return {};
}

/// Report for the subgroup-lattice embedding of the M3 contact structure:
/// b and c map to the two coordinate copies of Z4, a to the even-difference
/// subgroup, 0 and 1 to the trivial and full subgroups.
struct Z4Z4Report {
  int subgroup_count_subset_filter = 0;
  int subgroup_count_generators = 0;
  bool counts_agree = false;
  EmbeddingCheck embedding;
  std::vector<Element> image;  // m3_delta element index -> z4z4 element index
  bool pass() const { return counts_agree && embedding.pass(); }
};

inline Z4Z4Report verify_z4z4_embedding() {
  Z4Z4Report rep;
  const auto by_subset = detail::z4z4_subgroups_by_subset_filter();
  const auto by_gen = detail::z4z4_subgroups_by_generators();
  rep.subgroup_count_subset_filter = static_cast<int>(by_subset.size());
  rep.subgroup_count_generators = static_cast<int>(by_gen.size());
  rep.counts_agree = by_subset == by_gen;

  auto m3 = fixture("m3_delta");
  auto z = fixture("z4z4");

  uint16_t row = 0, col = 0, even = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const uint16_t bit = static_cast<uint16_t>(1u << (i << 2 | j));
      if (j == 0) row = static_cast<uint16_t>(row | bit);
      if (i == 0) col = static_cast<uint16_t>(col | bit);
      if (((i - j) & 1) == 0) even = static_cast<uint16_t>(even | bit);
    }
  auto find = [&](uint16_t sub) {
    for (int i = 0; i < static_cast<int>(by_subset.size()); ++i)
      if (by_subset[static_cast<size_t>(i)] == sub) return i;
    throw Error("mapped subgroup not found in the lattice");
  };
  // m3_delta element order is 0, c, a, b, 1
  rep.image = {find(1), find(col), find(even), find(row), find(0xFFFF)};
  rep.embedding = verify_semilattice_embedding(m3, z, rep.image);
  return rep;
}

}  // namespace csl
