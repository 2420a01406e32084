#pragma once

#include <string>
#include <utility>
#include <vector>

#include "schemeforge/errors.hpp"
#include "schemeforge/group.hpp"
#include "schemeforge/scheme.hpp"

namespace schemeforge {

inline bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

// Scheme whose relations are the orbits of the generated permutation group
// acting on ordered pairs.  The group must be transitive (otherwise the
// diagonal splits and verification rejects the matrix).
inline Scheme orbital_scheme(const PermutationSet& g) {
  const int n = g.degree;
  std::vector<int32_t> raw(static_cast<size_t>(n) * n, -1);
  std::vector<std::pair<int, int>> stack;
  int next = 0;
  for (int x0 = 0; x0 < n; ++x0)
    for (int y0 = 0; y0 < n; ++y0) {
      if (raw[x0 * n + y0] >= 0) continue;
      const int label = next++;
      raw[x0 * n + y0] = label;
      stack.push_back({x0, y0});
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (const auto& p : g.perms) {
          const int xx = p[x], yy = p[y];
          if (raw[xx * n + yy] < 0) {
            raw[xx * n + yy] = label;
            stack.push_back({xx, yy});
          }
        }
      }
    }
  return build_scheme(n, raw).scheme;
}

// Thin scheme of a group: (x,y) lies in the relation labelled y * x^-1.
inline Scheme group_scheme(const GroupTable& g) {
  const int n = g.order();
  std::vector<int32_t> mat(static_cast<size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) mat[x * n + y] = g.mul(y, g.inv(x));
  return build_scheme(n, mat).scheme;
}

// Wreath product on points W x Y: inside a fibre the relation of the first
// factor applies; between fibres only the second factor's relation is seen.
inline Scheme wreath_product(const Scheme& f, const Scheme& h) {
  const int nw = f.n_points(), ny = h.n_points();
  const int n = nw * ny;
  auto id = [&](int w, int y) { return y * nw + w; };
  std::vector<int32_t> mat(static_cast<size_t>(n) * n);
  for (int y = 0; y < ny; ++y)
    for (int y2 = 0; y2 < ny; ++y2)
      for (int w = 0; w < nw; ++w)
        for (int w2 = 0; w2 < nw; ++w2) {
          const Rel rel = y == y2 ? f.at(w, w2)
                                  : f.n_relations() + h.at(y, y2) - 1;
          mat[id(w, y) * static_cast<size_t>(n) + id(w2, y2)] = rel;
        }
  return build_scheme(n, mat).scheme;
}

namespace detail {

inline void check_desk_scale(int p, bool allow_large) {
  if (!is_odd_prime(p)) throw NotOddPrime(p);
  if (p > 7 && !allow_large)
    throw ResourceGuard("p = " + std::to_string(p) +
                        " exceeds the desk-scale guard; pass the allow-large flag");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The quasi-thin family on p^3 points.
//
// Points are triples over F_p.  The group is generated by all translations
// together with the linear map (x1,x2,x3) -> (x1+x2, x2+x3, x3).  H is the
// thin closed subset of translations along e1; T adds the e2 directions.

struct Ex41 {
  Scheme scheme;
  ClosedSubset h;  // thin radical, order p
  ClosedSubset t;  // thin residue, valency sum p^2
  int p = 0;
};

inline Ex41 example41(int p, bool allow_large = false) {
  detail::check_desk_scale(p, allow_large);
  const int n = p * p * p;
  auto idx = [&](int a, int b, int c) {
    return ((a % p + p) % p) * p * p + ((b % p + p) % p) * p + ((c % p + p) % p);
  };
  auto x1 = [&](int v) { return v / (p * p); };
  auto x2 = [&](int v) { return v / p % p; };
  auto x3 = [&](int v) { return v % p; };

  std::vector<std::vector<int>> perms;
  const int units[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (const auto& e : units) {
    std::vector<int> perm(n);
    for (int v = 0; v < n; ++v) perm[v] = idx(x1(v) + e[0], x2(v) + e[1], x3(v) + e[2]);
    perms.push_back(std::move(perm));
  }
  std::vector<int> iota(n);
  for (int v = 0; v < n; ++v) iota[v] = idx(x1(v) + x2(v), x2(v) + x3(v), x3(v));
  perms.push_back(std::move(iota));

  Ex41 out;
  out.p = p;
  out.scheme = orbital_scheme(PermutationSet::make(n, std::move(perms)));

  std::vector<Rel> hrels, trels;
  for (int k = 1; k < p; ++k) hrels.push_back(out.scheme.at(0, idx(k, 0, 0)));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) trels.push_back(out.scheme.at(0, idx(a, b, 0)));
  out.h = closed_subset(out.scheme, std::move(hrels));
  out.t = closed_subset(out.scheme, std::move(trels));

  if (out.scheme.n_relations() != p * p + p - 1 || out.h.size() != p ||
      out.t.size() != 2 * p - 1 || !(thin_radical(out.scheme) == out.h) ||
      !(thin_residue(out.scheme) == out.t))
    throw SchemeError("internal: p^3 family construction failed its invariants");
  return out;
}

// ---------------------------------------------------------------------------
// Heisenberg fixture: a scheme of order p^3 whose thin radical and thin
// residue agree and form an elementary abelian group of order p^2.
//
// W is the group of triples (a,b,c) with (a,b,c)(a',b',c') =
// (a+a', b+b', c+c'+a*b').  The scheme is the orbital scheme of the left
// translations of W extended by the automorphism fixing the abelian normal
// subgroup A = {(0,b,c)} pointwise and sending (1,0,0) to (1,1,1).

struct HeisenbergFixture {
  Scheme scheme;
  ClosedSubset t;  // thin radical = thin residue, elementary abelian p^2
  int p = 0;
};

inline HeisenbergFixture fixture_heisenberg(int p, bool allow_large = false) {
  detail::check_desk_scale(p, allow_large);
  const int n = p * p * p;
  auto idx = [&](long long a, long long b, long long c) {
    auto m = [&](long long v) { return static_cast<int>((v % p + p) % p); };
    return m(a) * p * p + m(b) * p + m(c);
  };
  auto pa = [&](int v) { return v / (p * p); };
  auto pb = [&](int v) { return v / p % p; };
  auto pc = [&](int v) { return v % p; };

  std::vector<std::vector<int>> perms;
  // Left translations x -> g * x by the three standard generators.
  const int gens[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (const auto& g : gens) {
    std::vector<int> perm(n);
    for (int v = 0; v < n; ++v)
      perm[v] = idx(g[0] + pa(v), g[1] + pb(v), g[2] + pc(v) + static_cast<long long>(g[0]) * pb(v));
    perms.push_back(std::move(perm));
  }
  // gamma(a,b,c) = (a, b+a, c + a + a(a-1)/2).
  std::vector<int> gamma(n);
  for (int v = 0; v < n; ++v) {
    const long long a = pa(v);
    gamma[v] = idx(a, pb(v) + a, pc(v) + a + a * (a - 1) / 2);
  }
  perms.push_back(std::move(gamma));

  HeisenbergFixture out;
  out.p = p;
  out.scheme = orbital_scheme(PermutationSet::make(n, std::move(perms)));
  out.t = thin_residue(out.scheme);

  const auto rad = thin_radical(out.scheme);
  bool ok = out.scheme.n_relations() == 2 * p * p - p && rad == out.t &&
            out.t.size() == p * p;
  if (ok) {
    const auto type = thin_group_type(out.scheme, out.t);
    ok = type.kind == GroupKind::ElementaryAbelian && type.table.exponent() == p;
  }
  if (ok) {
    const auto q = quotient_scheme(out.scheme, out.t);
    const auto qt = thin_group_type(q.scheme, full_subset(q.scheme));
    ok = qt.kind == GroupKind::Cyclic && qt.order == p;
  }
  if (!ok) throw SchemeError("internal: Heisenberg fixture failed its invariants");
  return out;
}

}  // namespace schemeforge
