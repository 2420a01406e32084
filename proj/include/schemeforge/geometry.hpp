#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schemeforge/errors.hpp"
#include "schemeforge/group.hpp"
#include "schemeforge/morphisms.hpp"
#include "schemeforge/scheme.hpp"

namespace schemeforge {

struct PlsLine {
  std::vector<int> points;      // sorted
  std::vector<Rel> stabilizer;  // the subgroup of the residue that cut the line
};

// Point-line geometry extracted from the coset structure: points are the
// cosets of the residue, and two cosets lie on a common line when the left
// stabilizer of the relations between them is a fixed proper subgroup.
struct PartialLinearSpace {
  int num_points = 0;
  int p = 0;  // residue prime; 0 when the geometry came from a raw family
  std::vector<PlsLine> lines;  // sorted lexicographically by point set
  bool valencies_one_p = false;
  std::optional<Quotient> quotient;  // present when built from a scheme
};

inline PartialLinearSpace partial_linear_space(const Scheme& s) {
  const ResidueContext ctx = residue_context(s);
  const ClassStabilizers cs = class_stabilizers(s, ctx.t);
  const Scheme& q = cs.quotient.scheme;
  const int m = q.n_points();
  const int tsize = ctx.t.size();

  PartialLinearSpace pls;
  pls.num_points = m;
  pls.p = ctx.p;
  {
    std::set<int> vals(s.valencies().begin(), s.valencies().end());
    pls.valencies_one_p = vals == std::set<int>{1, ctx.p};
  }

  // stabilizer of the class between cosets i and j
  auto stab_between = [&](int i, int j) -> const std::vector<Rel>& {
    return cs.stabilizer[q.at(i, j)];
  };

  std::map<std::vector<int>, PlsLine> dedup;
  for (int i = 0; i < m; ++i) {
    // group the other cosets by the stabilizer subgroup between them
    std::map<std::vector<Rel>, std::vector<int>> by_stab;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const auto& st = stab_between(i, j);
      if (static_cast<int>(st.size()) <= 1 || static_cast<int>(st.size()) >= tsize)
        continue;  // proper nontrivial subgroups only
      by_stab[st].push_back(j);
    }
    for (auto& [st, js] : by_stab) {
      PlsLine line;
      line.points = js;
      line.points.push_back(i);
      std::sort(line.points.begin(), line.points.end());
      line.stabilizer = st;
      dedup.emplace(line.points, std::move(line));
    }
  }
  for (auto& [pts, line] : dedup) pls.lines.push_back(std::move(line));
  pls.quotient = std::move(cs.quotient);
  return pls;
}

struct PlsReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Structural checks: lines carry at least two points, two points lie on at
// most one common line, no point lies on more than p+1 lines, and the
// automorphisms of the quotient permute the lines.
inline PlsReport validate_pls(const PartialLinearSpace& pls) {
  PlsReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.violations.push_back(std::move(msg));
  };

  std::set<std::vector<int>> line_set;
  for (const auto& line : pls.lines) {
    if (static_cast<int>(line.points.size()) < 2)
      fail("line with fewer than two points");
    for (int pt : line.points)
      if (pt < 0 || pt >= pls.num_points) fail("line point out of range");
    if (!std::is_sorted(line.points.begin(), line.points.end()) ||
        std::adjacent_find(line.points.begin(), line.points.end()) != line.points.end())
      fail("line points not sorted and distinct");
    if (!line_set.insert(line.points).second) fail("duplicate line");
  }

  std::map<std::pair<int, int>, int> pair_count;
  for (const auto& line : pls.lines)
    for (size_t a = 0; a < line.points.size(); ++a)
      for (size_t b = a + 1; b < line.points.size(); ++b)
        ++pair_count[{line.points[a], line.points[b]}];
  for (const auto& [pr, cnt] : pair_count)
    if (cnt > 1)
      fail("points " + std::to_string(pr.first) + "," + std::to_string(pr.second) +
           " lie on " + std::to_string(cnt) + " lines");

  if (pls.p > 0) {
    std::vector<int> through(pls.num_points, 0);
    for (const auto& line : pls.lines)
      for (int pt : line.points) ++through[pt];
    for (int x = 0; x < pls.num_points; ++x)
      if (through[x] > pls.p + 1)
        fail("point " + std::to_string(x) + " lies on " + std::to_string(through[x]) +
             " lines, above p+1");
  }

  if (pls.quotient) {
    const auto aut = automorphism_group(pls.quotient->scheme);
    for (const auto& g : aut.elements) {
      for (const auto& line : pls.lines) {
        std::vector<int> image;
        image.reserve(line.points.size());
        for (int pt : line.points) image.push_back(g[pt]);
        std::sort(image.begin(), image.end());
        if (!line_set.count(image)) {
          fail("a quotient automorphism does not permute the lines");
          break;
        }
      }
    }
  }
  return rep;
}

// True when every pair of points lies on exactly one line.  When the
// valencies were {1, p}, the order bounds that must then hold are asserted.
inline bool is_linear_space(const PartialLinearSpace& pls) {
  std::set<std::pair<int, int>> covered;
  for (const auto& line : pls.lines)
    for (size_t a = 0; a < line.points.size(); ++a)
      for (size_t b = a + 1; b < line.points.size(); ++b) {
        if (!covered.insert({line.points[a], line.points[b]}).second)
          return false;  // a pair on two lines is never a linear space
      }
  const long long want =
      static_cast<long long>(pls.num_points) * (pls.num_points - 1) / 2;
  const bool linear = static_cast<long long>(covered.size()) == want;

  if (pls.valencies_one_p && pls.p >= 2) {
    if (!linear)
      throw SchemeError("internal: valencies {1,p} but the geometry is not linear");
    if (pls.num_points > pls.p * pls.p + pls.p + 1)
      throw SchemeError("internal: linear space exceeds the p^2+p+1 point bound");
    for (const auto& line : pls.lines)
      if (static_cast<int>(line.points.size()) > pls.p + 1)
        throw SchemeError("internal: line exceeds the p+1 size bound");
  }
  return linear;
}

// ---------------------------------------------------------------------------
// Difference families.  Blocks live in a finite group; the associated
// geometry has the group's elements as points and the left translates of
// the blocks as lines.

struct DifferenceFamily {
  GroupTable group;
  std::vector<std::vector<int>> base_blocks;  // each sorted
  std::vector<int> histogram;                 // count per group element (0 unused)
  std::optional<int> lambda;                  // set when the nonzero counts agree
};

// Validates block contents and left-stabilizer triviality, then counts the
// quotients b^-1 b' over ordered pairs within each block.
inline DifferenceFamily check_difference_family(const GroupTable& g,
                                                std::vector<std::vector<int>> blocks) {
  DifferenceFamily df;
  df.group = g;
  const int v = g.order();
  for (auto& block : blocks) {
    std::sort(block.begin(), block.end());
    if (block.size() < 2) throw DataError("difference family block with fewer than 2 elements");
    if (std::adjacent_find(block.begin(), block.end()) != block.end())
      throw DataError("difference family block has repeated elements");
    for (int b : block)
      if (b < 0 || b >= v) throw DataError("difference family block element out of range");
  }
  for (size_t j = 0; j < blocks.size(); ++j) {
    const auto& block = blocks[j];
    for (int u = 1; u < v; ++u) {
      std::vector<int> image;
      image.reserve(block.size());
      for (int b : block) image.push_back(g.mul(u, b));
      std::sort(image.begin(), image.end());
      if (image == block)
        throw StabilizerNotTrivial("block " + std::to_string(j) +
                                       " is fixed by non-identity element " +
                                       std::to_string(u),
                                   static_cast<int>(j), u);
    }
  }
  df.histogram.assign(v, 0);
  for (const auto& block : blocks)
    for (int b : block)
      for (int b2 : block)
        if (b != b2) ++df.histogram[g.mul(g.inv(b), b2)];
  df.lambda = df.histogram.empty() ? std::optional<int>{} : std::optional<int>{0};
  for (int x = 1; x < v; ++x) {
    if (x == 1)
      df.lambda = df.histogram[x];
    else if (df.lambda && df.histogram[x] != *df.lambda)
      df.lambda.reset();
  }
  if (v == 1) df.lambda = 0;
  df.base_blocks = std::move(blocks);
  return df;
}

// Geometry of a difference family: points are the group elements, lines the
// distinct left translates of the blocks.  The lambda = 1 condition is
// cross-checked against pair coverage.
inline PartialLinearSpace pls_from_difference_family(const DifferenceFamily& df) {
  const GroupTable& g = df.group;
  const int v = g.order();
  std::set<std::vector<int>> lines;
  for (const auto& block : df.base_blocks)
    for (int u = 0; u < v; ++u) {
      std::vector<int> image;
      image.reserve(block.size());
      for (int b : block) image.push_back(g.mul(u, b));
      std::sort(image.begin(), image.end());
      lines.insert(std::move(image));
    }
  PartialLinearSpace pls;
  pls.num_points = v;
  pls.p = 0;
  for (const auto& pts : lines) {
    PlsLine line;
    line.points = pts;
    pls.lines.push_back(std::move(line));
  }

  // Pair coverage counts must agree with the difference counts.
  std::map<std::pair<int, int>, int> cover;
  for (const auto& line : pls.lines)
    for (size_t a = 0; a < line.points.size(); ++a)
      for (size_t b = a + 1; b < line.points.size(); ++b)
        ++cover[{line.points[a], line.points[b]}];
  const bool linear = static_cast<long long>(cover.size()) ==
                          static_cast<long long>(v) * (v - 1) / 2 &&
                      std::all_of(cover.begin(), cover.end(),
                                  [](const auto& kv) { return kv.second == 1; });
  if ((df.lambda && *df.lambda == 1) != linear)
    throw SchemeError("internal: lambda = 1 disagrees with pair coverage");
  return pls;
}

// Reads the difference family back off a scheme satisfying the standing
// hypothesis: the quotient by the residue is a group, the lines of the
// point geometry are translate-closed, and each translation orbit is
// generated by a block through the identity.
inline DifferenceFamily difference_family_from_scheme(const Scheme& s) {
  PartialLinearSpace pls = partial_linear_space(s);
  const Quotient& q = *pls.quotient;
  const ThinGroupType type = thin_group_type(q.scheme, full_subset(q.scheme));
  if (!type.is_group())
    throw NotThin("quotient by the thin residue has a member of valency > 1");
  const GroupTable& g = type.table;
  const int v = g.order();

  // Identify coset j with the quotient relation from coset 0 to j; relation
  // indices are exactly the group elements of `type.table`.
  std::vector<int> elem_of_point(v);
  for (int j = 0; j < v; ++j) elem_of_point[j] = q.scheme.at(0, j);

  auto line_elems = [&](const PlsLine& line, bool invert) {
    std::vector<int> out;
    out.reserve(line.points.size());
    for (int pt : line.points) {
      const int e = elem_of_point[pt];
      out.push_back(invert ? g.inv(e) : e);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  auto translate_closed = [&](bool invert) {
    std::set<std::vector<int>> lines;
    for (const auto& line : pls.lines) lines.insert(line_elems(line, invert));
    for (const auto& line : lines)
      for (int u = 0; u < v; ++u) {
        std::vector<int> image;
        image.reserve(line.size());
        for (int b : line) image.push_back(g.mul(u, b));
        std::sort(image.begin(), image.end());
        if (!lines.count(image)) return false;
      }
    return true;
  };

  bool invert = false;
  if (!translate_closed(false)) {
    if (!translate_closed(true))
      throw SchemeError("internal: line set is not closed under translation");
    invert = true;
  }

  // Orbit representatives: the lexicographically least translate through
  // the identity element.
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> reps;
  for (const auto& line : pls.lines) {
    auto elems = line_elems(line, invert);
    if (seen.count(elems)) continue;
    std::vector<std::vector<int>> orbit;
    std::vector<int> best;
    for (int u = 0; u < v; ++u) {
      std::vector<int> image;
      image.reserve(elems.size());
      for (int b : elems) image.push_back(g.mul(u, b));
      std::sort(image.begin(), image.end());
      if (std::find(image.begin(), image.end(), 0) != image.end())
        if (best.empty() || image < best) best = image;
      orbit.push_back(std::move(image));
    }
    for (auto& o : orbit) seen.insert(std::move(o));
    reps.push_back(std::move(best));
  }
  std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return check_difference_family(g, std::move(reps));
}

}  // namespace schemeforge
