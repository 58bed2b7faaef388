#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "csl/fixtures.hpp"
#include "csl/logic.hpp"
#include "oracles.hpp"

using namespace csl;

namespace {

const char* kAddSentence = "forall a b c. a C (b+c) -> (a C b | a C c)";
const char* kD1Sentence =
    "forall a b c0 c1. (b <= a+c0 & b <= a+c1 & ~(c0 C c1)) -> b <= a";

long long count_structures(int max_size, uint32_t filters, bool prune = false) {
  EnumerateOptions opts;
  opts.max_size = max_size;
  opts.filters = filters;
  opts.prune_iso = prune;
  long long n = 0;
  enumerate_structures(opts, [&](const ContactSemilattice&) {
    ++n;
    return true;
  });
  return n;
}

}  // namespace

TEST_CASE("parsing the additivity sentence") {
  const auto s = parse_sentence(kAddSentence);
  REQUIRE(s.variables == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(s.matrix->kind == Formula::Kind::Implies);
  const auto& lhs = *s.matrix->fl;
  REQUIRE(lhs.kind == Formula::Kind::Atom);
  CHECK(lhs.rel == Formula::Rel::Contact);
  CHECK(lhs.tl->kind == Term::Kind::Var);
  CHECK(lhs.tr->kind == Term::Kind::Join);
  const auto& rhs = *s.matrix->fr;
  CHECK(rhs.kind == Formula::Kind::Or);
}

TEST_CASE("parsing the d1 sentence") {
  const auto s = parse_sentence(kD1Sentence);
  REQUIRE(s.variables.size() == 4);
  REQUIRE(s.matrix->kind == Formula::Kind::Implies);
  const auto& hyp = *s.matrix->fl;
  CHECK(hyp.kind == Formula::Kind::And);  // left-folded conjunction
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_sentence("forall a. a +");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position >= 12);
    CHECK_FALSE(e.expected.empty());
  }
  CHECK_THROWS_AS(parse_sentence("forall a. b <= a"), ParseError);  // unbound variable
  CHECK_THROWS_AS(parse_sentence("forall a a. a <= a"), ParseError);
  CHECK_THROWS_AS(parse_sentence("a <= a"), ParseError);
  CHECK_THROWS_AS(parse_sentence("forall a. (a <= a"), ParseError);
}

TEST_CASE("parenthesized terms and formulas disambiguate") {
  CHECK_NOTHROW(parse_sentence("forall a b. (a+b) C a -> a C a"));
  CHECK_NOTHROW(parse_sentence("forall a b. (a C b) -> (b C a)"));
  CHECK_NOTHROW(parse_sentence("forall a. ~(~(a = a))"));
  CHECK_NOTHROW(parse_sentence("forall a b. a + (b + 0) = (a + b)"));
}

TEST_CASE("implication is right-associative and precedence holds") {
  // a C a -> a C a -> a = 0 parses as a C a -> (a C a -> a = 0)
  const auto s = parse_sentence("forall a. a C a -> a C a -> a = 0");
  REQUIRE(s.matrix->kind == Formula::Kind::Implies);
  CHECK(s.matrix->fr->kind == Formula::Kind::Implies);

  // ~ binds tighter than &, & tighter than |
  const auto t = parse_sentence("forall a b. ~a C b & a C b | a = b");
  REQUIRE(t.matrix->kind == Formula::Kind::Or);
  CHECK(t.matrix->fl->kind == Formula::Kind::And);
  CHECK(t.matrix->fl->fl->kind == Formula::Kind::Not);
}

TEST_CASE("eval finds the first falsifying assignment") {
  const auto add = parse_sentence(kAddSentence);
  const auto m3 = fixture("m3_overlap");
  const auto r = eval(add, m3);
  REQUIRE_FALSE(r.holds);
  // a -> c, b -> a, c -> b in fixture element order (0,c,a,b,1)
  CHECK(r.assignment == std::vector<Element>{1, 2, 3});

  const auto d1 = parse_sentence(kD1Sentence);
  CHECK(eval(d1, fixture("b8")).holds);
  CHECK_FALSE(eval(d1, fixture("m3_delta")).holds);

  const auto refl = parse_sentence("forall a. a <= a");
  CHECK(eval(refl, fixture("z4z4")).holds);
  CHECK(eval(refl, fixture("free_d")).holds);
}

TEST_CASE("eval agrees with the axiom checkers") {
  const auto add = parse_sentence(kAddSentence);
  const auto d1 = parse_sentence(kD1Sentence);
  EnumerateOptions opts;
  opts.max_size = 4;
  enumerate_structures(opts, [&](const ContactSemilattice& cs) {
    REQUIRE(eval(add, cs).holds == check_add(cs).pass);
    REQUIRE(eval(d1, cs).holds == check_d1(cs).pass);
    return true;
  });
}

TEST_CASE("enumeration counts at tiny sizes") {
  CHECK(count_structures(1, kFilterWeak) == 1);
  // the one-element structure plus the two-chain with its forced contact
  CHECK(count_structures(2, kFilterWeak) == 2);
  CHECK(count_structures(3, kFilterWeak) == 3);
}

TEST_CASE("enumeration agrees with the naive matrix oracle per semilattice") {
  for (int m = 1; m <= 3; ++m) {
    long long naive_total = 0;
    enumerate_semilattices(m, 6, [&](const JoinSemilattice& s) {
      if (s.size() == m) naive_total += test_oracles::naive_weak_relation_count(s);
      return true;
    });
    long long stream_total = 0;
    EnumerateOptions opts;
    opts.max_size = m;
    enumerate_structures(opts, [&](const ContactSemilattice& cs) {
      if (cs.size() == m) ++stream_total;
      return true;
    });
    INFO("size " << m);
    CHECK(naive_total == stream_total);
  }
}

TEST_CASE("filter counts are monotone") {
  const auto weak = count_structures(4, kFilterWeak);
  const auto d1 = count_structures(4, kFilterWeak | kFilterD1);
  const auto d1d2 = count_structures(4, kFilterWeak | kFilterD1 | kFilterD2);
  CHECK(d1d2 <= d1);
  CHECK(d1 <= weak);
  CHECK(weak > 0);
}

TEST_CASE("every enumerated structure is weak by construction") {
  EnumerateOptions opts;
  opts.max_size = 4;
  enumerate_structures(opts, [&](const ContactSemilattice& cs) {
    REQUIRE(all_pass(check_weak(cs)));
    return true;
  });
}

TEST_CASE("semilattice stream covers every isomorphism class up to size 5") {
  for (int m = 1; m <= 5; ++m) {
    const auto expected = test_oracles::naive_semilattice_classes(m);
    std::set<std::vector<Element>> seen;
    enumerate_semilattices(m, 6, [&](const JoinSemilattice& s) {
      if (s.size() == m) seen.insert(test_oracles::canonical_table(s));
      return true;
    });
    INFO("size " << m);
    CHECK(seen == expected);
  }
}

TEST_CASE("known lattice counts at small sizes") {
  // 1, 1, 1, 2, 5 isomorphism classes
  const int expected[] = {1, 1, 1, 2, 5};
  for (int m = 1; m <= 5; ++m)
    CHECK(test_oracles::naive_semilattice_classes(m).size() ==
          static_cast<size_t>(expected[m - 1]));
}

TEST_CASE("semilattice stream class counts match the known sequence up to size 7") {
  // finite join-semilattices with 0 are exactly the finite lattices:
  // 1, 1, 1, 2, 5, 15, 53 classes
  const size_t expected[] = {1, 1, 1, 2, 5, 15, 53};
  std::vector<std::set<std::vector<Element>>> classes(8);
  enumerate_semilattices(7, 7, [&](const JoinSemilattice& s) {
    classes[static_cast<size_t>(s.size())].insert(test_oracles::canonical_table(s));
    return true;
  });
  for (int m = 1; m <= 7; ++m) {
    INFO("size " << m);
    CHECK(classes[static_cast<size_t>(m)].size() == expected[m - 1]);
  }
}

TEST_CASE("semilattice stream covers all 222 classes at size 8", "[.slow]") {
  std::set<std::vector<Element>> classes;
  enumerate_semilattices(8, 8, [&](const JoinSemilattice& s) {
    if (s.size() == 8) classes.insert(test_oracles::canonical_table(s));
    return true;
  });
  CHECK(classes.size() == 222);
}

TEST_CASE("isomorphism pruning keeps exactly one structure per class") {
  std::set<std::vector<int>> seen;
  EnumerateOptions plain;
  plain.max_size = 4;
  enumerate_structures(plain, [&](const ContactSemilattice& cs) {
    seen.insert(test_oracles::canonical_structure(cs));
    return true;
  });
  EnumerateOptions pruned = plain;
  pruned.prune_iso = true;
  long long kept = 0;
  std::set<std::vector<int>> kept_classes;
  enumerate_structures(pruned, [&](const ContactSemilattice& cs) {
    ++kept;
    kept_classes.insert(test_oracles::canonical_structure(cs));
    return true;
  });
  CHECK(kept == static_cast<long long>(seen.size()));
  CHECK(kept_classes == seen);
}

TEST_CASE("enumeration cap guards the default configuration") {
  EnumerateOptions opts;
  opts.max_size = 7;  // default cap is 6
  CHECK_THROWS_AS(enumerate_structures(opts, [](const ContactSemilattice&) { return true; }),
                  CapExceededError);
}

TEST_CASE("refutation separates additivity from theory d1") {
  const auto add = parse_sentence(kAddSentence);
  const auto r = refute(add, Theory::D1, 8);
  REQUIRE(r.found);
  CHECK(r.model.size() == 8);
  // soundness: the countermodel passes the theory and falsifies the sentence
  CHECK(all_pass(check_weak(r.model)));
  CHECK(check_d1(r.model).pass);
  CHECK_FALSE(check_add(r.model).pass);
  CHECK_FALSE(eval(add, r.model).holds);
}

TEST_CASE("additivity is not refutable under d1+d2") {
  const auto add = parse_sentence(kAddSentence);
  const auto r = refute(add, Theory::D1D2, 5);
  REQUIRE_FALSE(r.found);
  CHECK(r.bound == 5);
  CHECK(r.structures_checked > 0);
}

TEST_CASE("the d1 sentence is not refutable under its own theory") {
  const auto d1 = parse_sentence(kD1Sentence);
  const auto r = refute(d1, Theory::D1, 4);
  REQUIRE_FALSE(r.found);
  CHECK(r.bound == 4);
}

TEST_CASE("isomorphism pruning keeps refutation outcomes") {
  for (const char* text : {kAddSentence, kD1Sentence, "forall a b. a C b -> b C a"}) {
    const auto s = parse_sentence(text);
    EnumerateOptions plain, pruned;
    plain.max_size = pruned.max_size = 4;
    plain.filters = pruned.filters = kFilterWeak | kFilterD1;
    pruned.prune_iso = true;
    bool found_plain = false, found_pruned = false;
    enumerate_structures(plain, [&](const ContactSemilattice& cs) {
      found_plain = !eval(s, cs).holds;
      return !found_plain;
    });
    enumerate_structures(pruned, [&](const ContactSemilattice& cs) {
      found_pruned = !eval(s, cs).holds;
      return !found_pruned;
    });
    INFO(text);
    CHECK(found_plain == found_pruned);
  }
}

TEST_CASE("pruned streams are never larger") {
  const auto plain = count_structures(4, kFilterWeak, false);
  const auto pruned = count_structures(4, kFilterWeak, true);
  CHECK(pruned <= plain);
  CHECK(pruned > 0);
}

TEST_CASE("substructures inherit d1 and d2") {
  EnumerateOptions opts;
  opts.max_size = 4;
  opts.filters = kFilterWeak | kFilterD1 | kFilterD2;
  enumerate_structures(opts, [&](const ContactSemilattice& cs) {
    const int n = cs.size();
    // every join-closed subset containing zero induces a substructure
    for (uint32_t sub = 1; sub < (uint32_t{1} << n); ++sub) {
      if (!(sub & 1u)) continue;
      std::vector<Element> keep;
      for (Element x = 0; x < n; ++x)
        if (sub >> x & 1u) keep.push_back(x);
      bool closed = true;
      for (Element x : keep)
        for (Element y : keep)
          if (!(sub >> cs.lattice.join(x, y) & 1u)) closed = false;
      if (!closed) continue;

      const int k = static_cast<int>(keep.size());
      std::vector<Element> inv(static_cast<size_t>(n), -1);
      for (int i = 0; i < k; ++i) inv[static_cast<size_t>(keep[static_cast<size_t>(i)])] = i;
      std::vector<std::string> names;
      for (Element x : keep) names.push_back(cs.lattice.name(x));
      std::vector<Element> table(static_cast<size_t>(k) * static_cast<size_t>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          table[static_cast<size_t>(i) * static_cast<size_t>(k) + static_cast<size_t>(j)] =
              inv[static_cast<size_t>(cs.lattice.join(keep[static_cast<size_t>(i)],
                                                      keep[static_cast<size_t>(j)]))];
      ContactRelation rel(k);
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j)
          if (cs.delta(keep[static_cast<size_t>(i)], keep[static_cast<size_t>(j)])) rel.set(i, j);
      ContactSemilattice substructure(make_semilattice(names, 0, std::move(table)),
                                      std::move(rel));
      REQUIRE(check_d1(substructure).pass);
      REQUIRE(check_d2(substructure).pass);
    }
    return true;
  });
}
