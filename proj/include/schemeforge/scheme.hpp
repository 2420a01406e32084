#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "schemeforge/errors.hpp"
#include "schemeforge/group.hpp"

namespace schemeforge {

using Rel = int;    // relation index
using Point = int;  // point index

namespace detail {
struct SchemeAccess;
}

// Association scheme on a finite point set.  Relations are indexed
// 0..r-1 with 0 the identity relation (the diagonal); the full table of
// intersection numbers c(u,v,w) is precomputed.
//
// Canonical indexing: 0 is the identity, the rest sorted by ascending
// valency, ties broken by the first cell (row-major) where the relation
// occurs.
class Scheme {
 public:
  int n_points() const { return n_; }
  int n_relations() const { return r_; }

  Rel at(Point x, Point y) const { return mat_[x * n_ + y]; }
  Rel dual(Rel s) const { return inv_[s]; }  // s* (transpose relation)
  int valency(Rel s) const { return val_[s]; }
  const std::vector<int>& valencies() const { return val_; }

  // Intersection number: for (x,y) in w, the number of z with (x,z) in u
  // and (z,y) in v.
  int c(Rel u, Rel v, Rel w) const { return tensor_[(u * r_ + v) * r_ + w]; }

  bool is_symmetric_relation(Rel s) const { return inv_[s] == s; }
  bool is_thin() const {
    return std::all_of(val_.begin(), val_.end(), [](int v) { return v == 1; });
  }

  const std::vector<int32_t>& matrix() const { return mat_; }

 private:
  friend struct detail::SchemeAccess;
  int n_ = 0, r_ = 0;
  std::vector<int32_t> mat_;     // n*n, row-major
  std::vector<Rel> inv_;         // r
  std::vector<int> val_;         // r
  std::vector<int32_t> tensor_;  // r*r*r, (u*r+v)*r+w
};

struct BuildResult {
  Scheme scheme;
  std::vector<Rel> relabel;  // input relation index -> canonical index
};

namespace detail {

// Largest relation count for which the eager c-tensor is allowed.
inline constexpr int kMaxRelations = 512;

struct RawAnalysis {
  int n = 0, r = 0;
  std::vector<Rel> inv;
  std::vector<int> val;
  std::vector<int32_t> tensor;
  std::vector<std::pair<int, int>> first_cell;  // first occurrence per relation
};

// Checks the association scheme axioms for an n x n matrix whose entries
// are the relation indices 0..r-1, with the diagonal equal to relation 0.
// Returns involution, valencies and the verified tensor, all in the input
// labels.  Throws AxiomViolation with a witness otherwise.
inline RawAnalysis analyze_matrix(int n, const std::vector<int32_t>& m) {
  if (n <= 0 || static_cast<int>(m.size()) != n * n)
    throw AxiomViolation(AxiomViolation::Kind::BadShape,
                         "relation matrix must be square and non-empty");
  int r = 0;
  for (int32_t v : m) {
    if (v < 0)
      throw AxiomViolation(AxiomViolation::Kind::BadValue,
                           "negative relation index");
    r = std::max(r, static_cast<int>(v) + 1);
  }
  if (r > kMaxRelations)
    throw ResourceGuard("relation count " + std::to_string(r) +
                        " exceeds the guard (" + std::to_string(kMaxRelations) + ")");

  RawAnalysis a;
  a.n = n;
  a.r = r;
  a.first_cell.assign(r, {-1, -1});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Rel s = m[x * n + y];
      if (a.first_cell[s].first < 0) a.first_cell[s] = {x, y};
    }
  for (Rel s = 0; s < r; ++s)
    if (a.first_cell[s].first < 0)
      throw AxiomViolation(AxiomViolation::Kind::BadValue,
                           "relation index " + std::to_string(s) + " unused");

  // Identity: relation 0 is exactly the diagonal.
  for (int x = 0; x < n; ++x) {
    if (m[x * n + x] != 0) {
      AxiomViolation e(AxiomViolation::Kind::Identity,
                       "diagonal cell is not relation 0");
      e.x = x;
      e.y = x;
      throw e;
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && m[x * n + y] == 0) {
        AxiomViolation e(AxiomViolation::Kind::Identity,
                         "relation 0 occurs off the diagonal");
        e.x = x;
        e.y = y;
        throw e;
      }

  // Involution: the transpose of each relation is a single relation.
  a.inv.assign(r, -1);
  for (Rel s = 0; s < r; ++s) {
    auto [x, y] = a.first_cell[s];
    a.inv[s] = m[y * n + x];
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (a.inv[m[x * n + y]] != m[y * n + x]) {
        AxiomViolation e(AxiomViolation::Kind::Involution,
                         "transpose of a relation is split across relations");
        e.x = x;
        e.y = y;
        throw e;
      }

  // Regularity: c(u,v,w) computed at the first cell of w must hold at
  // every cell of w.
  a.tensor.assign(static_cast<size_t>(r) * r * r, 0);
  for (Rel w = 0; w < r; ++w) {
    auto [x, y] = a.first_cell[w];
    for (int z = 0; z < n; ++z)
      ++a.tensor[(m[x * n + z] * static_cast<size_t>(r) + m[z * n + y]) * r + w];
  }
  std::vector<int32_t> cnt(static_cast<size_t>(r) * r);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Rel w = m[x * n + y];
      std::fill(cnt.begin(), cnt.end(), 0);
      for (int z = 0; z < n; ++z)
        ++cnt[m[x * n + z] * static_cast<size_t>(r) + m[z * n + y]];
      for (Rel u = 0; u < r; ++u)
        for (Rel v = 0; v < r; ++v)
          if (cnt[u * static_cast<size_t>(r) + v] !=
              a.tensor[(u * static_cast<size_t>(r) + v) * r + w]) {
            AxiomViolation e(AxiomViolation::Kind::Regularity,
                             "intersection number depends on the chosen pair");
            e.x = x;
            e.y = y;
            e.u = u;
            e.v = v;
            e.w = w;
            e.expected = a.tensor[(u * static_cast<size_t>(r) + v) * r + w];
            e.got = cnt[u * static_cast<size_t>(r) + v];
            throw e;
          }
    }

  a.val.assign(r, 0);
  for (Rel s = 0; s < r; ++s) a.val[s] = a.tensor[(s * static_cast<size_t>(r) + a.inv[s]) * r + 0];
  return a;
}

struct SchemeAccess {
  static Scheme assemble(int n, std::vector<int32_t> mat, RawAnalysis a) {
    Scheme s;
    s.n_ = n;
    s.r_ = a.r;
    s.mat_ = std::move(mat);
    s.inv_ = std::move(a.inv);
    s.val_ = std::move(a.val);
    s.tensor_ = std::move(a.tensor);
    return s;
  }
};

inline Scheme assemble(int n, std::vector<int32_t> mat, RawAnalysis a) {
  return SchemeAccess::assemble(n, std::move(mat), std::move(a));
}

}  // namespace detail

// Diagonal must already be relation 0; indices are kept as given.  Used
// where relation identity with an existing scheme matters (twists).
inline Scheme verify_scheme(int n, const std::vector<int32_t>& matrix) {
  auto a = detail::analyze_matrix(n, matrix);
  return detail::assemble(n, matrix, std::move(a));
}

// Verifies the axioms and renumbers relations into canonical order.
inline BuildResult build_scheme(int n, const std::vector<int32_t>& matrix) {
  auto a = detail::analyze_matrix(n, matrix);
  const int r = a.r;

  std::vector<Rel> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Rel s, Rel t) {
    if (s == 0 || t == 0) return s == 0;
    if (a.val[s] != a.val[t]) return a.val[s] < a.val[t];
    return a.first_cell[s] < a.first_cell[t];
  });
  std::vector<Rel> relabel(r);
  for (int i = 0; i < r; ++i) relabel[order[i]] = i;

  std::vector<int32_t> mat(matrix.size());
  for (size_t i = 0; i < matrix.size(); ++i) mat[i] = relabel[matrix[i]];

  detail::RawAnalysis b;
  b.n = n;
  b.r = r;
  b.inv.resize(r);
  b.val.resize(r);
  b.first_cell.resize(r);
  b.tensor.assign(a.tensor.size(), 0);
  for (Rel s = 0; s < r; ++s) {
    b.inv[relabel[s]] = relabel[a.inv[s]];
    b.val[relabel[s]] = a.val[s];
    b.first_cell[relabel[s]] = a.first_cell[s];
  }
  for (Rel u = 0; u < r; ++u)
    for (Rel v = 0; v < r; ++v)
      for (Rel w = 0; w < r; ++w)
        b.tensor[(relabel[u] * static_cast<size_t>(r) + relabel[v]) * r + relabel[w]] =
            a.tensor[(u * static_cast<size_t>(r) + v) * r + w];

  return BuildResult{detail::assemble(n, std::move(mat), std::move(b)), std::move(relabel)};
}

inline BuildResult build_scheme(const std::vector<std::vector<int>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<int32_t> flat;
  flat.reserve(static_cast<size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw AxiomViolation(AxiomViolation::Kind::BadShape, "matrix is not square");
    for (int v : row) flat.push_back(v);
  }
  return build_scheme(n, flat);
}

// ---------------------------------------------------------------------------
// Closed subsets and the operations built on them.

// A subset T of the relations that contains the identity, is closed under
// the involution and under complex products.  Kept sorted.
struct ClosedSubset {
  std::vector<Rel> members;        // sorted, members[0] == 0
  std::vector<char> mask;          // indexed by relation
  int valency_sum = 0;             // n_T = sum of member valencies

  bool contains(Rel s) const { return mask[s] != 0; }
  int size() const { return static_cast<int>(members.size()); }
  bool operator==(const ClosedSubset& o) const { return members == o.members; }
};

// Complex product PQ = { w : c(u,v,w) != 0 for some u in P, v in Q }.
inline std::vector<Rel> complex_product(const Scheme& s, const std::vector<Rel>& p,
                                        const std::vector<Rel>& q) {
  std::vector<char> hit(s.n_relations(), 0);
  for (Rel u : p)
    for (Rel v : q)
      for (Rel w = 0; w < s.n_relations(); ++w)
        if (s.c(u, v, w) > 0) hit[w] = 1;
  std::vector<Rel> out;
  for (Rel w = 0; w < s.n_relations(); ++w)
    if (hit[w]) out.push_back(w);
  return out;
}

namespace detail {

inline ClosedSubset make_subset_unchecked(const Scheme& s, std::vector<Rel> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  ClosedSubset t;
  t.mask.assign(s.n_relations(), 0);
  for (Rel m : members) {
    t.mask[m] = 1;
    t.valency_sum += s.valency(m);
  }
  t.members = std::move(members);
  return t;
}

}  // namespace detail

inline bool is_closed(const Scheme& s, const std::vector<Rel>& members,
                      int* bad_u = nullptr, int* bad_v = nullptr, int* bad_w = nullptr) {
  std::vector<char> in(s.n_relations(), 0);
  for (Rel m : members) in[m] = 1;
  if (members.empty() || !in[0]) return false;
  for (Rel u : members)
    for (Rel v : members)
      for (Rel w = 0; w < s.n_relations(); ++w)
        if (s.c(u, v, w) > 0 && !in[w]) {
          if (bad_u) *bad_u = u;
          if (bad_v) *bad_v = v;
          if (bad_w) *bad_w = w;
          return false;
        }
  return true;
}

inline ClosedSubset full_subset(const Scheme& s) {
  std::vector<Rel> all(s.n_relations());
  std::iota(all.begin(), all.end(), 0);
  return detail::make_subset_unchecked(s, std::move(all));
}

inline ClosedSubset closed_subset(const Scheme& s, std::vector<Rel> members) {
  members.push_back(0);
  int u = -1, v = -1, w = -1;
  if (!is_closed(s, members, &u, &v, &w))
    throw NotClosed("subset is not closed: relation " + std::to_string(w) +
                        " lies in the product of " + std::to_string(u) + " and " +
                        std::to_string(v),
                    u, v, w);
  return detail::make_subset_unchecked(s, std::move(members));
}

// Smallest closed subset containing the given relations.
inline ClosedSubset closure(const Scheme& s, const std::vector<Rel>& seed) {
  const int r = s.n_relations();
  std::vector<char> in(r, 0);
  std::vector<Rel> queue;
  auto add = [&](Rel x) {
    if (!in[x]) {
      in[x] = 1;
      queue.push_back(x);
    }
  };
  add(0);
  for (Rel x : seed) {
    add(x);
    add(s.dual(x));
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    Rel u = queue[head];
    for (size_t j = 0; j <= head; ++j) {
      Rel v = queue[j];
      for (Rel w = 0; w < r; ++w)
        if (s.c(u, v, w) > 0 || s.c(v, u, w) > 0) {
          add(w);
          add(s.dual(w));
        }
    }
  }
  std::vector<Rel> members;
  for (Rel x = 0; x < r; ++x)
    if (in[x]) members.push_back(x);
  return detail::make_subset_unchecked(s, std::move(members));
}

// Thin radical: all relations of valency 1 (always a closed subset).
inline ClosedSubset thin_radical(const Scheme& s) {
  std::vector<Rel> members;
  for (Rel x = 0; x < s.n_relations(); ++x)
    if (s.valency(x) == 1) members.push_back(x);
  return detail::make_subset_unchecked(s, std::move(members));
}

// Thin residue: closure of the union of all products s*s.
inline ClosedSubset thin_residue(const Scheme& s) {
  std::vector<Rel> seed;
  for (Rel x = 0; x < s.n_relations(); ++x) {
    for (Rel w = 0; w < s.n_relations(); ++w)
      if (s.c(s.dual(x), x, w) > 0) seed.push_back(w);
  }
  return closure(s, seed);
}

// T is strongly normal if s* T s is contained in T for every relation s.
inline bool is_strongly_normal(const Scheme& s, const ClosedSubset& t) {
  for (Rel x = 0; x < s.n_relations(); ++x) {
    auto left = complex_product(s, {s.dual(x)}, t.members);
    auto prod = complex_product(s, left, {x});
    for (Rel w : prod)
      if (!t.contains(w)) return false;
  }
  return true;
}

// Partition of the points into cosets xT = { y : (x,y) in some t of T }.
struct Cosets {
  std::vector<std::vector<Point>> blocks;  // each sorted; blocks sorted by least point
  std::vector<int> block_of;               // point -> block index
};

inline Cosets cosets(const Scheme& s, const ClosedSubset& t) {
  const int n = s.n_points();
  Cosets c;
  c.block_of.assign(n, -1);
  for (Point x = 0; x < n; ++x) {
    if (c.block_of[x] >= 0) continue;
    std::vector<Point> block;
    for (Point y = 0; y < n; ++y)
      if (t.contains(s.at(x, y))) block.push_back(y);
    const int id = static_cast<int>(c.blocks.size());
    for (Point y : block) {
      if (c.block_of[y] >= 0)
        throw SchemeError("coset blocks overlap; subset is not closed");
      c.block_of[y] = id;
    }
    c.blocks.push_back(std::move(block));
  }
  return c;
}

// Left stabilizer of s in T: the t in T with ts = {s}.
inline std::vector<Rel> left_stabilizer(const Scheme& s, const ClosedSubset& t, Rel x) {
  std::vector<Rel> out;
  for (Rel m : t.members) {
    bool only_x = true;
    for (Rel w = 0; w < s.n_relations() && only_x; ++w)
      if (w != x && s.c(m, x, w) > 0) only_x = false;
    if (only_x && s.c(m, x, x) > 0) out.push_back(m);
  }
  return out;
}

// Quotient scheme S//T on the cosets of T; relations are the classes TsT.
struct Quotient {
  Scheme scheme;
  Cosets coset;
  std::vector<Rel> class_of;  // parent relation -> quotient relation
};

inline Quotient quotient_scheme(const Scheme& s, const ClosedSubset& t) {
  const int r = s.n_relations();
  // Group the relations by the double coset TsT.
  std::vector<int> cls(r, -1);
  int next = 0;
  std::vector<std::vector<Rel>> classes;
  for (Rel x = 0; x < r; ++x) {
    if (cls[x] >= 0) continue;
    auto dc = complex_product(s, t.members, complex_product(s, {x}, t.members));
    for (Rel y : dc) {
      if (cls[y] >= 0 && cls[y] != next)
        throw SchemeError("double cosets overlap; subset is not closed");
      cls[y] = next;
    }
    classes.push_back(std::move(dc));
    ++next;
  }

  Cosets co = cosets(s, t);
  const int m = static_cast<int>(co.blocks.size());
  std::vector<int32_t> qmat(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      qmat[i * m + j] = cls[s.at(co.blocks[i][0], co.blocks[j][0])];

  auto built = build_scheme(m, qmat);
  Quotient q;
  q.scheme = std::move(built.scheme);
  q.coset = std::move(co);
  q.class_of.resize(r);
  for (Rel x = 0; x < r; ++x) q.class_of[x] = built.relabel[cls[x]];
  return q;
}

// Subscheme induced by T on the coset of the point x.
struct Subscheme {
  Scheme scheme;
  std::vector<Point> points;      // parent points of the block, sorted
  std::vector<Rel> parent_rel;    // subscheme relation -> parent relation
};

inline Subscheme subscheme(const Scheme& s, const ClosedSubset& t, Point x) {
  Cosets co = cosets(s, t);
  const auto& pts = co.blocks[co.block_of[x]];
  const int m = static_cast<int>(pts.size());
  // Temporary labels: position of the relation inside T.
  std::vector<int> pos(s.n_relations(), -1);
  for (int i = 0; i < t.size(); ++i) pos[t.members[i]] = i;
  std::vector<int32_t> mat(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Rel rel = s.at(pts[i], pts[j]);
      if (pos[rel] < 0) throw SchemeError("block pair leaves the subset");
      mat[i * m + j] = pos[rel];
    }
  auto built = build_scheme(m, mat);
  Subscheme out;
  out.scheme = std::move(built.scheme);
  out.points = pts;
  out.parent_rel.assign(built.relabel.size(), -1);
  for (size_t old = 0; old < built.relabel.size(); ++old)
    out.parent_rel[built.relabel[old]] = t.members[old];
  return out;
}

// ---------------------------------------------------------------------------
// Thin closed subsets as groups.

enum class GroupKind {
  NotAGroup,  // the subset has a member of valency > 1
  Trivial,
  Cyclic,
  ElementaryAbelian,
  AbelianOther,
  NonAbelian
};

struct ThinGroupType {
  GroupKind kind = GroupKind::Trivial;
  int order = 0;        // group order when thin, 0 otherwise
  GroupTable table;     // element i = t.members[i]; empty when not a group
  int members = 0;      // |T|
  int valency_sum = 0;  // n_T

  bool is_group() const { return kind != GroupKind::NotAGroup; }
};

// Interprets a thin closed subset as a group: member i * member j is the
// unique relation in their product.  A subset with a valency > 1 member is
// classified as NotAGroup (with its size and valency sum) rather than
// rejected.
inline ThinGroupType thin_group_type(const Scheme& s, const ClosedSubset& t) {
  for (Rel m : t.members)
    if (s.valency(m) != 1) {
      ThinGroupType fat;
      fat.kind = GroupKind::NotAGroup;
      fat.members = t.size();
      fat.valency_sum = t.valency_sum;
      return fat;
    }
  const int k = t.size();
  std::vector<int> pos(s.n_relations(), -1);
  for (int i = 0; i < k; ++i) pos[t.members[i]] = i;
  std::vector<int> tab(static_cast<size_t>(k) * k, -1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      int found = -1;
      for (Rel w = 0; w < s.n_relations(); ++w)
        if (s.c(t.members[i], t.members[j], w) > 0) {
          if (found >= 0) throw NotThin("thin product is not a single relation");
          found = w;
        }
      if (found < 0 || pos[found] < 0) throw NotThin("thin product leaves the subset");
      tab[i * k + j] = pos[found];
    }

  ThinGroupType out;
  out.order = k;
  out.members = t.size();
  out.valency_sum = t.valency_sum;
  out.table = GroupTable::make(k, std::move(tab));
  if (k == 1) {
    out.kind = GroupKind::Trivial;
    return out;
  }
  const bool abelian = out.table.is_abelian();
  bool cyclic = false;
  for (int a = 0; a < k && !cyclic; ++a) cyclic = out.table.element_order(a) == k;
  const int e = out.table.exponent();
  bool prime_exp = e >= 2;
  for (int d = 2; d * d <= e && prime_exp; ++d)
    if (e % d == 0) prime_exp = false;
  if (abelian && prime_exp && k > e)
    out.kind = GroupKind::ElementaryAbelian;
  else if (cyclic)
    out.kind = GroupKind::Cyclic;
  else if (abelian)
    out.kind = GroupKind::AbelianOther;
  else
    out.kind = GroupKind::NonAbelian;
  return out;
}

inline int scheme_order(const Scheme& s) { return s.n_points(); }

// ---------------------------------------------------------------------------
// Standing hypothesis shared by the geometric and character-theoretic
// analyses: the scheme has order p^3 and its thin radical and thin residue
// coincide and form an elementary abelian group of order p^2.

struct ResidueContext {
  ClosedSubset t;  // the common radical/residue
  int p = 0;
};

inline ResidueContext residue_context(const Scheme& s) {
  ResidueContext ctx;
  ctx.t = thin_residue(s);
  if (!(thin_radical(s) == ctx.t))
    throw HypothesisViolation("thin radical and thin residue differ");
  ThinGroupType type = thin_group_type(s, ctx.t);
  if (!type.is_group())
    throw HypothesisViolation("thin residue has a member of valency > 1");
  const int p = type.table.exponent();
  if (type.kind != GroupKind::ElementaryAbelian || type.order != p * p)
    throw HypothesisViolation(
        "thin residue is not elementary abelian of square order");
  if (s.n_points() != p * p * p)
    throw HypothesisViolation("scheme order is not p^3 for the residue prime p");
  ctx.p = p;
  return ctx;
}

// Left stabilizers grouped by double coset: every relation in the class
// T s T must produce the same stabilizer for it to be well defined.
struct ClassStabilizers {
  Quotient quotient;
  std::vector<std::vector<Rel>> stabilizer;  // per quotient relation
};

inline ClassStabilizers class_stabilizers(const Scheme& s, const ClosedSubset& t) {
  ClassStabilizers out;
  out.quotient = quotient_scheme(s, t);
  out.stabilizer.assign(out.quotient.scheme.n_relations(), {});
  std::vector<char> seen(out.quotient.scheme.n_relations(), 0);
  for (Rel x = 0; x < s.n_relations(); ++x) {
    if (t.contains(x)) continue;  // stabilizers vary freely inside T itself
    const Rel cls = out.quotient.class_of[x];
    auto stab = left_stabilizer(s, t, x);
    if (!seen[cls]) {
      seen[cls] = 1;
      out.stabilizer[cls] = std::move(stab);
    } else if (out.stabilizer[cls] != stab) {
      throw IllDefinedStabilizer("left stabilizer varies inside the class of relation " +
                                 std::to_string(x));
    }
  }
  return out;
}

}  // namespace schemeforge
