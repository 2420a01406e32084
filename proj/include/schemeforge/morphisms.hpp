#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "schemeforge/errors.hpp"
#include "schemeforge/scheme.hpp"

namespace schemeforge {

// A bijection of relation indices; rho[u] is the image of u.
using RelationBijection = std::vector<Rel>;

// Checks that rho carries the intersection numbers of a onto those of b.
inline bool is_algebraic_isomorphism(const Scheme& a, const Scheme& b,
                                     const RelationBijection& rho) {
  const int r = a.n_relations();
  if (b.n_relations() != r || static_cast<int>(rho.size()) != r) return false;
  for (Rel u = 0; u < r; ++u)
    for (Rel v = 0; v < r; ++v)
      for (Rel w = 0; w < r; ++w)
        if (a.c(u, v, w) != b.c(rho[u], rho[v], rho[w])) return false;
  return true;
}

// Enumerates every relation bijection between the tensors of a and b, in
// lexicographic order of the image sequence.  The visitor returns false to
// stop the enumeration.
template <class Visitor>
void for_each_algebraic_isomorphism(const Scheme& a, const Scheme& b, Visitor&& visit) {
  const int r = a.n_relations();
  if (b.n_relations() != r || a.n_points() != b.n_points()) return;

  std::vector<Rel> rho(r, -1);
  std::vector<char> used(r, 0);
  std::vector<Rel> assigned;  // in assignment order

  // Triples whose slots all lie in `assigned` (which includes the newest
  // relation u) and that mention u at least once.
  auto consistent = [&](Rel u) {
    for (Rel x : assigned)
      for (Rel y : assigned) {
        if (a.c(u, x, y) != b.c(rho[u], rho[x], rho[y])) return false;
        if (a.c(x, u, y) != b.c(rho[x], rho[u], rho[y])) return false;
        if (a.c(x, y, u) != b.c(rho[x], rho[y], rho[u])) return false;
      }
    return true;
  };

  bool stop = false;
  std::function<void(Rel)> rec = [&](Rel u) {
    if (stop) return;
    if (u == r) {
      if (!visit(const_cast<const RelationBijection&>(rho))) stop = true;
      return;
    }
    for (Rel w = u == 0 ? 0 : 1; w < r && !stop; ++w) {
      if (used[w]) continue;
      if (u == 0 && w != 0) break;  // identity maps to identity
      if (a.valency(u) != b.valency(w)) continue;
      // involution consistency
      if (a.dual(u) == u && b.dual(w) != w) continue;
      if (a.dual(u) != u && b.dual(w) == w) continue;
      if (a.dual(u) < u && rho[a.dual(u)] != b.dual(w)) continue;
      rho[u] = w;
      used[w] = 1;
      assigned.push_back(u);
      if (consistent(u)) rec(u + 1);
      assigned.pop_back();
      used[w] = 0;
      rho[u] = -1;
    }
  };
  rec(0);
}

namespace detail {

// Word-packed candidate sets for the point-map backtracker.
struct PointSearch {
  const Scheme& a;
  const Scheme& b;
  const RelationBijection& rho;
  int n, words;
  // For each point y of b and relation v: bits over y' with b(y,y') = v
  // (rows) and with b(y',y) = v (cols).
  std::vector<uint64_t> row, col;
  std::vector<uint64_t> cand;  // (depth * n + x) * words
  std::vector<int> map;

  PointSearch(const Scheme& a_, const Scheme& b_, const RelationBijection& rho_)
      : a(a_), b(b_), rho(rho_), n(a_.n_points()), words((a_.n_points() + 63) / 64) {
    const int r = b.n_relations();
    row.assign(static_cast<size_t>(n) * r * words, 0);
    col.assign(static_cast<size_t>(n) * r * words, 0);
    for (int y = 0; y < n; ++y)
      for (int y2 = 0; y2 < n; ++y2) {
        row[(static_cast<size_t>(y) * r + b.at(y, y2)) * words + y2 / 64] |= 1ull << (y2 % 64);
        col[(static_cast<size_t>(y) * r + b.at(y2, y)) * words + y2 / 64] |= 1ull << (y2 % 64);
      }
    cand.assign(static_cast<size_t>(n + 1) * n * words, 0);
    map.assign(n, -1);
  }

  uint64_t* cand_at(int depth, int x) {
    return cand.data() + (static_cast<size_t>(depth) * n + x) * words;
  }

  template <class Visitor>
  bool run(Visitor&& visit) {
    // Depth 0: every point is a candidate for every slot.
    for (int x = 0; x < n; ++x) {
      uint64_t* c = cand_at(0, x);
      for (int w = 0; w < words; ++w) c[w] = ~0ull;
      if (n % 64) c[words - 1] = (1ull << (n % 64)) - 1;
    }
    return descend(0, visit);
  }

 private:
  template <class Visitor>
  bool descend(int depth, Visitor&& visit) {
    if (depth == n) return visit(const_cast<const std::vector<int>&>(map));
    const uint64_t* cur = cand_at(depth, depth);
    const int r = b.n_relations();
    for (int w = 0; w < words; ++w) {
      uint64_t bits = cur[w];
      while (bits) {
        const int y = w * 64 + __builtin_ctzll(bits);
        bits &= bits - 1;
        map[depth] = y;
        bool dead = false;
        for (int x = depth + 1; x < n && !dead; ++x) {
          const uint64_t* rm = row.data() + (static_cast<size_t>(y) * r + rho[a.at(depth, x)]) * words;
          const uint64_t* cm = col.data() + (static_cast<size_t>(y) * r + rho[a.at(x, depth)]) * words;
          const uint64_t* src = cand_at(depth, x);
          uint64_t* dst = cand_at(depth + 1, x);
          uint64_t any = 0;
          for (int k = 0; k < words; ++k) {
            dst[k] = src[k] & rm[k] & cm[k];
            any |= dst[k];
          }
          dead = any == 0;
        }
        if (!dead && !descend(depth + 1, visit)) return false;
      }
    }
    map[depth] = -1;
    return true;
  }
};

}  // namespace detail

// Enumerates every point bijection compatible with the relation bijection
// rho (points mapped so that the relation of every image pair is the rho
// image of the original relation).  Injectivity follows from the identity
// relation.  The visitor returns false to stop.
template <class Visitor>
void for_each_point_isomorphism(const Scheme& a, const Scheme& b,
                                const RelationBijection& rho, Visitor&& visit) {
  if (a.n_points() != b.n_points() || a.n_relations() != b.n_relations()) return;
  detail::PointSearch search(a, b, rho);
  search.run(visit);
}

struct SchemeIsomorphism {
  RelationBijection rho;
  std::vector<int> point_map;
};

// Exhaustive: returns the first isomorphism in enumeration order, or
// nullopt after the full search space is ruled out.
inline std::optional<SchemeIsomorphism> find_isomorphism(const Scheme& a, const Scheme& b) {
  if (a.n_points() != b.n_points() || a.n_relations() != b.n_relations()) return std::nullopt;
  std::optional<SchemeIsomorphism> out;
  for_each_algebraic_isomorphism(a, b, [&](const RelationBijection& rho) {
    for_each_point_isomorphism(a, b, rho, [&](const std::vector<int>& pm) {
      out = SchemeIsomorphism{rho, pm};
      return false;
    });
    return !out.has_value();
  });
  return out;
}

// All permutations of the points that fix every relation setwise.
struct AutomorphismGroup {
  std::vector<std::vector<int>> elements;
  long long order() const { return static_cast<long long>(elements.size()); }
};

inline AutomorphismGroup automorphism_group(const Scheme& s) {
  RelationBijection id(s.n_relations());
  for (Rel u = 0; u < s.n_relations(); ++u) id[u] = u;
  AutomorphismGroup g;
  for_each_point_isomorphism(s, s, id, [&](const std::vector<int>& pm) {
    g.elements.push_back(pm);
    return true;
  });
  return g;
}

struct SchurianReport {
  bool schurian = false;
  long long aut_order = 0;
  int orbitals = 0;
  int relations = 0;
};

// A scheme is Schurian when the orbitals of its automorphism group are
// exactly its relations.  The orbitals always refine the relations, so
// comparing counts suffices.
inline SchurianReport is_schurian(const Scheme& s) {
  const auto aut = automorphism_group(s);
  const int n = s.n_points();
  std::vector<int> parent(static_cast<size_t>(n) * n);
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& g : aut.elements)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const int p = find(x * n + y), q = find(g[x] * n + g[y]);
        if (p != q) parent[p] = q;
      }
  int orbitals = 0;
  for (int i = 0; i < n * n; ++i)
    if (find(i) == i) ++orbitals;
  SchurianReport rep;
  rep.aut_order = aut.order();
  rep.orbitals = orbitals;
  rep.relations = s.n_relations();
  rep.schurian = orbitals == s.n_relations();
  return rep;
}

// ---------------------------------------------------------------------------
// Automorphisms of a closed subset's tensor, and their extension.

// All permutations of the members of T (given as positions into t.members,
// position 0 fixed) preserving valencies, the involution and the
// intersection numbers within T.
inline std::vector<std::vector<int>> closed_subset_automorphisms(const Scheme& s,
                                                                 const ClosedSubset& t) {
  const int k = t.size();
  std::vector<int> pos(s.n_relations(), -1);
  for (int i = 0; i < k; ++i) pos[t.members[i]] = i;
  auto cc = [&](int i, int j, int l) { return s.c(t.members[i], t.members[j], t.members[l]); };
  auto dd = [&](int i) { return pos[s.dual(t.members[i])]; };

  std::vector<std::vector<int>> out;
  std::vector<int> f(k, -1);
  std::vector<char> used(k, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      out.push_back(f);
      return;
    }
    for (int w = i == 0 ? 0 : 1; w < k; ++w) {
      if (used[w]) continue;
      if (i == 0 && w != 0) break;
      if (s.valency(t.members[i]) != s.valency(t.members[w])) continue;
      if (dd(i) == i && dd(w) != w) continue;
      if (dd(i) != i && dd(w) == w) continue;
      if (dd(i) < i && f[dd(i)] != dd(w)) continue;
      f[i] = w;
      // Incremental tensor check over triples that involve position i.
      bool ok = true;
      for (int x = 0; x <= i && ok; ++x)
        for (int y = 0; y <= i && ok; ++y) {
          if (cc(i, x, y) != cc(w, f[x], f[y])) ok = false;
          if (ok && cc(x, i, y) != cc(f[x], w, f[y])) ok = false;
          if (ok && cc(x, y, i) != cc(f[x], f[y], w)) ok = false;
        }
      if (ok) {
        used[w] = 1;
        rec(i + 1);
        used[w] = 0;
      }
      f[i] = -1;
    }
  };
  rec(0);
  return out;
}

// Relation bijection of the whole scheme that applies iota on T (iota given
// over member positions) and the identity elsewhere.
inline RelationBijection extend_by_identity(const Scheme& s, const ClosedSubset& t,
                                            const std::vector<int>& iota) {
  RelationBijection rho(s.n_relations());
  for (Rel u = 0; u < s.n_relations(); ++u) rho[u] = u;
  for (int i = 0; i < t.size(); ++i) rho[t.members[i]] = t.members[iota[i]];
  return rho;
}

// Certificate for the extension criterion: when every product sH with s
// outside T equals sT, and every t in T outside H satisfies tH = {t}, each
// automorphism of T fixing H pointwise extends to the whole tensor by the
// identity.
struct ExtensionCertificate {
  bool outer_products_match = false;  // sH == sT for all s outside T
  bool inner_fixed = false;           // tH == {t} for all t in T \ H
  bool iota_fixes_h = false;
  bool iota_in_aut_t = false;
  bool extends = false;               // identity extension preserves the tensor
  Rel witness = -1;
  bool ok() const {
    return outer_products_match && inner_fixed && iota_fixes_h && iota_in_aut_t && extends;
  }
};

inline ExtensionCertificate check_extension(const Scheme& s, const ClosedSubset& t,
                                            const ClosedSubset& h,
                                            const std::vector<int>& iota) {
  ExtensionCertificate cert;
  cert.outer_products_match = true;
  for (Rel u = 0; u < s.n_relations() && cert.outer_products_match; ++u) {
    if (t.contains(u)) continue;
    if (complex_product(s, {u}, h.members) != complex_product(s, {u}, t.members)) {
      cert.outer_products_match = false;
      cert.witness = u;
    }
  }
  cert.inner_fixed = true;
  for (Rel u : t.members) {
    if (h.contains(u)) continue;
    if (complex_product(s, {u}, h.members) != std::vector<Rel>{u}) {
      cert.inner_fixed = false;
      cert.witness = u;
      break;
    }
  }
  cert.iota_fixes_h = true;
  for (int i = 0; i < t.size(); ++i)
    if (h.contains(t.members[i]) && iota[i] != i) {
      cert.iota_fixes_h = false;
      cert.witness = t.members[i];
      break;
    }
  {
    auto cc = [&](int i, int j, int l) {
      return s.c(t.members[i], t.members[j], t.members[l]);
    };
    cert.iota_in_aut_t = true;
    for (int i = 0; i < t.size() && cert.iota_in_aut_t; ++i)
      for (int j = 0; j < t.size() && cert.iota_in_aut_t; ++j)
        for (int l = 0; l < t.size(); ++l)
          if (cc(i, j, l) != cc(iota[i], iota[j], iota[l])) {
            cert.iota_in_aut_t = false;
            cert.witness = t.members[l];
            break;
          }
  }
  cert.extends = is_algebraic_isomorphism(s, s, extend_by_identity(s, t, iota));
  return cert;
}

}  // namespace schemeforge
