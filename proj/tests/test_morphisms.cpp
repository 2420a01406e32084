#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "schemeforge/constructors.hpp"
#include "schemeforge/morphisms.hpp"

using namespace schemeforge;

namespace {

// Oracle: count tensor-preserving relation bijections by checking every
// permutation against the full definition.
int brute_algebraic_count(const Scheme& a, const Scheme& b) {
  const int r = a.n_relations();
  if (b.n_relations() != r) return 0;
  std::vector<Rel> tail(r - 1);
  std::iota(tail.begin(), tail.end(), 1);
  int count = 0;
  do {
    RelationBijection rho(r);
    rho[0] = 0;
    std::copy(tail.begin(), tail.end(), rho.begin() + 1);
    if (is_algebraic_isomorphism(a, b, rho)) ++count;
  } while (std::next_permutation(tail.begin(), tail.end()));
  return count;
}

int search_algebraic_count(const Scheme& a, const Scheme& b) {
  int count = 0;
  for_each_algebraic_isomorphism(a, b, [&](const RelationBijection&) {
    ++count;
    return true;
  });
  return count;
}

// Oracle: all point permutations fixing every relation, tried one by one.
std::set<std::vector<int>> brute_point_autos(const Scheme& s) {
  const int n = s.n_points();
  std::vector<int> f(n);
  std::iota(f.begin(), f.end(), 0);
  std::set<std::vector<int>> out;
  do {
    bool good = true;
    for (int x = 0; x < n && good; ++x)
      for (int y = 0; y < n && good; ++y)
        if (s.at(f[x], f[y]) != s.at(x, y)) good = false;
    if (good) out.insert(f);
  } while (std::next_permutation(f.begin(), f.end()));
  return out;
}

Scheme permute_points(const Scheme& s, const std::vector<int>& f) {
  const int n = s.n_points();
  std::vector<int> flat(static_cast<size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) flat[f[x] * n + f[y]] = s.at(x, y);
  return verify_scheme(n, flat);
}

}  // namespace

TEST_CASE("relation bijection enumeration agrees with the brute oracle") {
  auto c3 = group_scheme(GroupTable::cyclic(3));
  auto c6 = group_scheme(GroupTable::cyclic(6));
  auto s3 = group_scheme(GroupTable::dihedral(3));
  auto w22 = wreath_product(group_scheme(GroupTable::cyclic(2)),
                            group_scheme(GroupTable::cyclic(2)));

  REQUIRE(search_algebraic_count(c3, c3) == 2);  // identity and inversion
  REQUIRE(search_algebraic_count(c6, c6) == 2);
  REQUIRE(search_algebraic_count(s3, s3) == 6);  // inner automorphisms of S3

  for (const Scheme* s : {&c3, &c6, &s3, &w22})
    REQUIRE(search_algebraic_count(*s, *s) == brute_algebraic_count(*s, *s));

  // cross pairs: different tensors admit no bijection at all
  REQUIRE(search_algebraic_count(c6, s3) == 0);
  REQUIRE(brute_algebraic_count(c6, s3) == 0);
}

TEST_CASE("point automorphisms agree with the brute oracle") {
  auto c6 = group_scheme(GroupTable::cyclic(6));
  auto s3 = group_scheme(GroupTable::dihedral(3));
  auto rank2 = orbital_scheme(PermutationSet::make(4, {{1, 0, 2, 3}, {1, 2, 3, 0}}));
  auto w22 = wreath_product(group_scheme(GroupTable::cyclic(2)),
                            group_scheme(GroupTable::cyclic(2)));

  for (const Scheme* s : {&c6, &s3, &rank2, &w22}) {
    auto got = automorphism_group(*s);
    std::set<std::vector<int>> as_set(got.elements.begin(), got.elements.end());
    REQUIRE(as_set.size() == got.elements.size());
    REQUIRE(as_set == brute_point_autos(*s));
  }

  // a thin scheme is fixed exactly by its own translations
  REQUIRE(automorphism_group(c6).order() == 6);
  REQUIRE(automorphism_group(s3).order() == 6);
  // the rank-2 scheme is fixed by the whole symmetric group
  REQUIRE(automorphism_group(rank2).order() == 24);
}

TEST_CASE("wreath square has the layered automorphism group") {
  auto w = wreath_product(group_scheme(GroupTable::cyclic(3)),
                          group_scheme(GroupTable::cyclic(3)));
  auto aut = automorphism_group(w);
  REQUIRE(aut.order() == 81);  // independent fibre translations + base translation
  auto rep = is_schurian(w);
  REQUIRE(rep.schurian);
  REQUIRE(rep.orbitals == w.n_relations());
  REQUIRE(rep.aut_order == 81);
}

TEST_CASE("schurian reports on small schemes") {
  auto rep = is_schurian(group_scheme(GroupTable::cyclic(5)));
  REQUIRE(rep.schurian);
  REQUIRE(rep.aut_order == 5);
  REQUIRE(rep.orbitals == 5);
  REQUIRE(rep.relations == 5);

  auto rank2 = orbital_scheme(PermutationSet::make(4, {{1, 0, 2, 3}, {1, 2, 3, 0}}));
  auto rep2 = is_schurian(rank2);
  REQUIRE(rep2.schurian);
  REQUIRE(rep2.orbitals == 2);
}

TEST_CASE("the orbit construction is recognized as schurian") {
  auto fx = fixture_heisenberg(3);
  auto rep = is_schurian(fx.scheme);
  REQUIRE(rep.schurian);
  REQUIRE(rep.orbitals == 15);
}

TEST_CASE("isomorphisms survive point relabeling") {
  auto s3 = group_scheme(GroupTable::dihedral(3));
  std::vector<int> f{3, 0, 5, 1, 4, 2};
  auto shuffled = permute_points(s3, f);
  auto iso = find_isomorphism(s3, shuffled);
  REQUIRE(iso.has_value());
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y)
      REQUIRE(shuffled.at(iso->point_map[x], iso->point_map[y]) ==
              iso->rho[s3.at(x, y)]);
}

TEST_CASE("isomorphism search scales to the coset family") {
  auto ex = example41(3);
  std::vector<int> f(27);
  std::iota(f.begin(), f.end(), 0);
  // fixed scramble
  std::vector<int> g{13, 2, 25, 7, 0, 19, 11, 22, 5, 16, 9, 1, 26,
                     4, 18, 8, 23, 12, 3, 20, 15, 6, 24, 10, 17, 21, 14};
  auto shuffled = permute_points(ex.scheme, g);
  auto iso = find_isomorphism(ex.scheme, shuffled);
  REQUIRE(iso.has_value());
  for (int x = 0; x < 27; ++x)
    for (int y = 0; y < 27; ++y)
      REQUIRE(shuffled.at(iso->point_map[x], iso->point_map[y]) ==
              iso->rho[ex.scheme.at(x, y)]);
}

TEST_CASE("non-isomorphic pairs come back empty") {
  auto c9 = group_scheme(GroupTable::cyclic(9));
  auto c33 = group_scheme(
      GroupTable::direct_product(GroupTable::cyclic(3), GroupTable::cyclic(3)));
  REQUIRE_FALSE(find_isomorphism(c9, c33).has_value());

  auto c4 = group_scheme(GroupTable::cyclic(4));
  auto v4 = group_scheme(
      GroupTable::direct_product(GroupTable::cyclic(2), GroupTable::cyclic(2)));
  REQUIRE_FALSE(find_isomorphism(c4, v4).has_value());

  // size mismatch short-circuits
  REQUIRE_FALSE(find_isomorphism(c4, c9).has_value());
}

TEST_CASE("automorphisms of a closed subset") {
  auto fx = fixture_heisenberg(3);
  // the residue is elementary abelian of rank 2: its tensor automorphisms
  // form the full general linear group of the plane
  REQUIRE(closed_subset_automorphisms(fx.scheme, fx.t).size() == 48);

  auto ex = example41(3);
  auto subs = closed_subset_automorphisms(ex.scheme, ex.t);
  REQUIRE(subs.size() == 4);
  for (const auto& iota : subs) REQUIRE(iota[0] == 0);
}

TEST_CASE("extension certificates") {
  auto ex = example41(3);

  SECTION("identity always extends when the coset conditions hold") {
    std::vector<int> id{0, 1, 2, 3, 4};
    auto cert = check_extension(ex.scheme, ex.t, ex.h, id);
    REQUIRE(cert.outer_products_match);
    REQUIRE(cert.inner_fixed);
    REQUIRE(cert.iota_fixes_h);
    REQUIRE(cert.iota_in_aut_t);
    REQUIRE(cert.extends);
    REQUIRE(cert.ok());
  }

  SECTION("the nontrivial fixing automorphism extends") {
    std::vector<int> swap_tails{0, 1, 2, 4, 3};
    auto cert = check_extension(ex.scheme, ex.t, ex.h, swap_tails);
    REQUIRE(cert.ok());
    auto rho = extend_by_identity(ex.scheme, ex.t, swap_tails);
    REQUIRE(rho[5] == 7);
    REQUIRE(rho[7] == 5);
    REQUIRE(rho[1] == 1);
    REQUIRE(is_algebraic_isomorphism(ex.scheme, ex.scheme, rho));
  }

  SECTION("moving the radical is detected") {
    std::vector<int> moves_h{0, 2, 1, 3, 4};
    auto cert = check_extension(ex.scheme, ex.t, ex.h, moves_h);
    REQUIRE_FALSE(cert.iota_fixes_h);
    REQUIRE_FALSE(cert.ok());
  }

  SECTION("valency-breaking maps are not subset automorphisms") {
    std::vector<int> bad{0, 3, 2, 1, 4};
    auto cert = check_extension(ex.scheme, ex.t, ex.h, bad);
    REQUIRE_FALSE(cert.iota_in_aut_t);
    REQUIRE_FALSE(cert.ok());
  }
}
