#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <vector>

#include "schemeforge/constructors.hpp"
#include "schemeforge/scheme.hpp"

using namespace schemeforge;

namespace {
std::map<int, int> valency_histogram(const Scheme& s) {
  std::map<int, int> h;
  for (Rel u = 0; u < s.n_relations(); ++u) ++h[s.valency(u)];
  return h;
}
}  // namespace

TEST_CASE("orbital scheme of a regular action equals the group scheme") {
  // right translation x -> x+1 on Z_3
  auto orb = orbital_scheme(PermutationSet::make(3, {{1, 2, 0}}));
  auto grp = group_scheme(GroupTable::cyclic(3));
  REQUIRE(orb.n_points() == 3);
  REQUIRE(orb.n_relations() == 3);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) REQUIRE(orb.at(x, y) == grp.at(x, y));
}

TEST_CASE("orbital scheme of the full symmetric action is the rank-2 scheme") {
  auto s = orbital_scheme(PermutationSet::make(4, {{1, 0, 2, 3}, {1, 2, 3, 0}}));
  REQUIRE(s.n_relations() == 2);
  REQUIRE(s.valency(1) == 3);
}

TEST_CASE("intransitive actions are rejected") {
  // two fixed blocks: the diagonal orbit splits, which violates the axioms
  REQUIRE_THROWS_AS(orbital_scheme(PermutationSet::make(4, {{1, 0, 2, 3}})),
                    AxiomViolation);
}

TEST_CASE("group schemes are thin and faithful to the table") {
  auto s3 = group_scheme(GroupTable::dihedral(3));
  REQUIRE(s3.n_points() == 6);
  REQUIRE(s3.is_thin());
  REQUIRE_FALSE(s3.n_relations() != 6);
  // relation labels on row 0 follow the element labels
  for (int y = 0; y < 6; ++y) REQUIRE(s3.at(0, y) == y);
}

TEST_CASE("wreath product sizes and valencies") {
  auto f = group_scheme(GroupTable::cyclic(2));
  auto h = group_scheme(GroupTable::cyclic(3));
  auto w = wreath_product(f, h);
  REQUIRE(w.n_points() == 6);
  REQUIRE(w.n_relations() == f.n_relations() + h.n_relations() - 1);
  auto hist = valency_histogram(w);
  REQUIRE(hist[1] == 2);
  REQUIRE(hist[2] == 2);  // each outer thin class blows up to valency |F|
}

TEST_CASE("coset family with prescribed radical and residue") {
  auto ex = example41(3);
  REQUIRE(ex.p == 3);
  REQUIRE(ex.scheme.n_points() == 27);
  REQUIRE(ex.scheme.n_relations() == 11);  // p^2 + p - 1
  auto hist = valency_histogram(ex.scheme);
  REQUIRE(hist[1] == 3);
  REQUIRE(hist[3] == 8);
  REQUIRE(ex.h.members == std::vector<Rel>{0, 1, 2});
  REQUIRE(ex.t.members == std::vector<Rel>{0, 1, 2, 5, 7});
  REQUIRE(thin_radical(ex.scheme) == ex.h);
  REQUIRE(thin_residue(ex.scheme) == ex.t);
  REQUIRE(is_strongly_normal(ex.scheme, ex.t));
  REQUIRE(ex.t.valency_sum == 9);

  auto q = quotient_scheme(ex.scheme, ex.t);
  REQUIRE(q.scheme.n_points() == 3);
  REQUIRE(thin_group_type(q.scheme, full_subset(q.scheme)).kind == GroupKind::Cyclic);
}

TEST_CASE("coset family at p = 5") {
  auto ex = example41(5);
  REQUIRE(ex.scheme.n_points() == 125);
  REQUIRE(ex.scheme.n_relations() == 29);
  REQUIRE(ex.h.size() == 5);
  REQUIRE(ex.t.size() == 9);
  REQUIRE(ex.t.valency_sum == 25);
}

TEST_CASE("nilpotent fixture matches its frozen shape") {
  auto fx = fixture_heisenberg(3);
  REQUIRE(fx.p == 3);
  REQUIRE(fx.scheme.n_points() == 27);
  REQUIRE(fx.scheme.n_relations() == 15);  // 2p^2 - p
  auto hist = valency_histogram(fx.scheme);
  REQUIRE(hist[1] == 9);
  REQUIRE(hist[3] == 6);
  REQUIRE(fx.t.size() == 9);
  REQUIRE(thin_radical(fx.scheme) == fx.t);
  REQUIRE(thin_residue(fx.scheme) == fx.t);
  REQUIRE_FALSE(fx.scheme.is_thin());

  auto q = quotient_scheme(fx.scheme, fx.t);
  auto qt = thin_group_type(q.scheme, full_subset(q.scheme));
  REQUIRE(qt.kind == GroupKind::Cyclic);
  REQUIRE(qt.order == 3);
}

TEST_CASE("nilpotent fixture at p = 5") {
  auto fx = fixture_heisenberg(5);
  REQUIRE(fx.scheme.n_points() == 125);
  REQUIRE(fx.scheme.n_relations() == 45);
  REQUIRE(fx.t.size() == 25);
  REQUIRE(fx.t.valency_sum == 25);
}

TEST_CASE("prime guards") {
  REQUIRE_THROWS_AS(example41(2), NotOddPrime);
  REQUIRE_THROWS_AS(example41(4), NotOddPrime);
  REQUIRE_THROWS_AS(example41(9), NotOddPrime);
  REQUIRE_THROWS_AS(fixture_heisenberg(1), NotOddPrime);
  REQUIRE_THROWS_AS(example41(11), ResourceGuard);
  REQUIRE_THROWS_AS(fixture_heisenberg(11), ResourceGuard);
}

TEST_CASE("largest default size stays within budget") {
  auto ex = example41(7);
  REQUIRE(ex.scheme.n_points() == 343);
  REQUIRE(ex.scheme.n_relations() == 55);
  REQUIRE(ex.t.size() == 13);
}
