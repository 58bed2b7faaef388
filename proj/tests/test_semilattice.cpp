#include <catch2/catch_amalgamated.hpp>

#include "csl/fixtures.hpp"
#include "csl/logic.hpp"
#include "csl/semilattice.hpp"

using namespace csl;

namespace {

JoinSemilattice chain(int n) {
  std::vector<std::vector<bool>> leq(static_cast<size_t>(n),
                                     std::vector<bool>(static_cast<size_t>(n), false));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) leq[static_cast<size_t>(a)][static_cast<size_t>(b)] = true;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("c" + std::to_string(i));
  return make_semilattice(names, 0, join_table_from_order(leq));
}

}  // namespace

TEST_CASE("one-point semilattice validates") {
  auto r = validate_semilattice({"0"}, 0, {0});
  REQUIRE(r.ok());
  CHECK(r.value->size() == 1);
}

TEST_CASE("M3 join table validates") {
  const auto m3 = fixture("m3_overlap").lattice;
  auto r = validate_semilattice(m3.names(), m3.zero(), m3.table());
  REQUIRE(r.ok());
}

TEST_CASE("idempotence violation is reported with its witness") {
  // join(a,a) = 0 on the two-element carrier
  auto r = validate_semilattice({"0", "a"}, 0, {0, 1, 1, 0});
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.violations.size() >= 1);
  CHECK(r.violations[0].law == LawViolation::Law::Idempotence);
  CHECK(r.violations[0].witness[0] == 1);
}

TEST_CASE("commutativity and zero violations carry witnesses") {
  // join(0,1)=1 but join(1,0)=0
  auto r = validate_semilattice({"0", "a"}, 0, {0, 1, 0, 1});
  REQUIRE_FALSE(r.ok());
  bool saw_comm = false;
  for (const auto& v : r.violations) saw_comm |= v.law == LawViolation::Law::Commutativity;
  CHECK(saw_comm);
}

TEST_CASE("derived order on M3") {
  const auto m3 = fixture("m3_overlap").lattice;
  const Element c = 1, a = 2, b = 3, top = 4;
  CHECK(m3.leq(a, top));
  CHECK_FALSE(m3.leq(a, b));
  CHECK_FALSE(m3.leq(b, c));
  for (Element x = 0; x < m3.size(); ++x) CHECK(m3.leq(0, x));
}

TEST_CASE("meets of M3 atoms hit bottom") {
  const auto m3 = fixture("m3_overlap").lattice;
  const auto meet = meets(m3);
  auto at = [&](Element x, Element y) {
    return meet[static_cast<size_t>(x) * 5 + static_cast<size_t>(y)];
  };
  CHECK(at(1, 2) == 0);
  CHECK(at(2, 3) == 0);
  CHECK(at(2, 4) == 2);  // atom against top
}

TEST_CASE("meets on a chain and a powerset") {
  const auto c3 = chain(3);
  const auto meet = meets(c3);
  CHECK(meet[1 * 3 + 2] == 1);

  const auto p2 = powerset_algebra(2);
  const auto pm = meets(p2);
  for (Element a = 0; a < 4; ++a)
    for (Element b = 0; b < 4; ++b)
      CHECK(pm[static_cast<size_t>(a) * 4 + static_cast<size_t>(b)] == (a & b));
}

TEST_CASE("meet table satisfies the greatest-lower-bound contract") {
  auto check_glb = [](const JoinSemilattice& s) {
    const auto meet = meets(s);
    const int n = s.size();
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) {
        const Element m =
            meet[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)];
        REQUIRE(s.leq(m, a));
        REQUIRE(s.leq(m, b));
        for (Element x = 0; x < n; ++x)
          if (s.leq(x, a) && s.leq(x, b)) REQUIRE(s.leq(x, m));
      }
  };
  check_glb(fixture("m3_overlap").lattice);
  check_glb(fixture("b8").lattice);
  check_glb(powerset_algebra(3));
  enumerate_semilattices(5, 6, [&](const JoinSemilattice& s) {
    check_glb(s);
    return true;
  });
}

TEST_CASE("distributivity verdicts") {
  CHECK(is_distributive(powerset_algebra(2)).distributive);
  CHECK(is_distributive(chain(3)).distributive);

  const auto m3 = is_distributive(fixture("m3_overlap").lattice);
  REQUIRE_FALSE(m3.distributive);
  // witness is a triple of distinct atoms
  for (Element w : m3.witness) {
    CHECK(w >= 1);
    CHECK(w <= 3);
  }
  CHECK(m3.witness[0] != m3.witness[1]);
  CHECK(m3.witness[1] != m3.witness[2]);
}

TEST_CASE("powerset algebra shapes") {
  CHECK(powerset_algebra(0).size() == 1);
  const auto p2 = powerset_algebra(2);
  CHECK(p2.size() == 4);
  const auto p3 = powerset_algebra(3);
  CHECK(p3.size() == 8);
  int atoms = 0;
  for (Element x = 1; x < 8; ++x) {
    bool atom = true;
    for (Element y = 1; y < 8; ++y)
      if (y != x && p3.leq(y, x)) atom = false;
    atoms += atom;
  }
  CHECK(atoms == 3);
  CHECK_THROWS_AS(powerset_algebra(3, 2), BaseTooLargeError);
  CHECK_THROWS_AS(powerset_algebra(-1), BaseTooLargeError);
}

TEST_CASE("powerset algebras validate and are distributive") {
  for (int k = 0; k <= 6; ++k) {
    const auto p = powerset_algebra(k);
    auto r = validate_semilattice(p.names(), p.zero(), p.table());
    REQUIRE(r.ok());
    CHECK(is_distributive(p).distributive);
  }
}

TEST_CASE("join is the least upper bound") {
  auto check_lub = [](const JoinSemilattice& s) {
    const int n = s.size();
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) {
        const Element j = s.join(a, b);
        REQUIRE(s.leq(a, j));
        REQUIRE(s.leq(b, j));
        for (Element u = 0; u < n; ++u)
          if (s.leq(a, u) && s.leq(b, u)) REQUIRE(s.leq(j, u));
      }
  };
  check_lub(fixture("m3_overlap").lattice);
  check_lub(fixture("free_d").lattice);
  enumerate_semilattices(5, 6, [&](const JoinSemilattice& s) {
    check_lub(s);
    return true;
  });
}

TEST_CASE("derived order is a partial order") {
  auto check_po = [](const JoinSemilattice& s) {
    const int n = s.size();
    for (Element a = 0; a < n; ++a) REQUIRE(s.leq(a, a));
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) {
        if (s.leq(a, b) && s.leq(b, a)) REQUIRE(a == b);
        for (Element c = 0; c < n; ++c)
          if (s.leq(a, b) && s.leq(b, c)) REQUIRE(s.leq(a, c));
      }
  };
  check_po(fixture("b8").lattice);
  check_po(fixture("z4z4").lattice);
  enumerate_semilattices(5, 6, [&](const JoinSemilattice& s) {
    check_po(s);
    return true;
  });
}

TEST_CASE("order input without a unique least upper bound is rejected") {
  // two incomparable elements with no upper bound at all
  std::vector<std::vector<bool>> leq(3, std::vector<bool>(3, false));
  for (int i = 0; i < 3; ++i) leq[static_cast<size_t>(i)][static_cast<size_t>(i)] = true;
  leq[0][1] = leq[0][2] = true;
  CHECK_THROWS_AS(join_table_from_order(leq), NoUniqueJoinError);

  // two minimal upper bounds, neither least
  std::vector<std::vector<bool>> diamond(5, std::vector<bool>(5, false));
  for (int i = 0; i < 5; ++i) diamond[static_cast<size_t>(i)][static_cast<size_t>(i)] = true;
  for (int i = 1; i <= 2; ++i) {
    diamond[0][static_cast<size_t>(i)] = true;
    diamond[static_cast<size_t>(i)][3] = true;
    diamond[static_cast<size_t>(i)][4] = true;
  }
  diamond[0][3] = diamond[0][4] = true;
  CHECK_THROWS_AS(join_table_from_order(diamond), NoUniqueJoinError);
}

TEST_CASE("make_semilattice rejects broken input") {
  CHECK_THROWS_AS(make_semilattice({"0", "a"}, 0, {0, 1, 1, 0}), ValidationError);
  CHECK_THROWS_AS(make_semilattice({"0", "0"}, 0, {0, 1, 1, 1}), ValidationError);
}
