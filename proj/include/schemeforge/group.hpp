#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "schemeforge/errors.hpp"

namespace schemeforge {

// Finite group given by its multiplication table.  Element 0 is the
// identity.  tab[a * order + b] = a * b.
class GroupTable {
 public:
  static GroupTable make(int order, std::vector<int> tab) {
    if (order <= 0 || static_cast<int>(tab.size()) != order * order)
      throw DataError("group table has wrong size");
    for (int v : tab)
      if (v < 0 || v >= order) throw DataError("group table entry out of range");
    GroupTable g;
    g.order_ = order;
    g.tab_ = std::move(tab);
    for (int a = 0; a < order; ++a)
      if (g.mul(0, a) != a || g.mul(a, 0) != a)
        throw DataError("element 0 is not an identity");
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        for (int c = 0; c < order; ++c)
          if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
            throw DataError("group table is not associative");
    g.inv_.assign(order, -1);
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b)
        if (g.mul(a, b) == 0) {
          g.inv_[a] = b;
          break;
        }
      if (g.inv_[a] < 0) throw DataError("element has no inverse");
    }
    return g;
  }

  int order() const { return order_; }
  int mul(int a, int b) const { return tab_[a * order_ + b]; }
  int inv(int a) const { return inv_[a]; }

  int element_order(int a) const {
    int k = 1, x = a;
    while (x != 0) {
      x = mul(x, a);
      ++k;
    }
    return k;
  }

  bool is_abelian() const {
    for (int a = 0; a < order_; ++a)
      for (int b = a + 1; b < order_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  int exponent() const {
    int e = 1;
    for (int a = 0; a < order_; ++a) e = std::lcm(e, element_order(a));
    return e;
  }

  static GroupTable cyclic(int n) {
    std::vector<int> tab(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) tab[a * n + b] = (a + b) % n;
    return make(n, std::move(tab));
  }

  static GroupTable direct_product(const GroupTable& g, const GroupTable& h) {
    const int n = g.order() * h.order();
    std::vector<int> tab(n * n);
    auto id = [&](int a, int b) { return a * h.order() + b; };
    for (int a1 = 0; a1 < g.order(); ++a1)
      for (int a2 = 0; a2 < h.order(); ++a2)
        for (int b1 = 0; b1 < g.order(); ++b1)
          for (int b2 = 0; b2 < h.order(); ++b2)
            tab[id(a1, a2) * n + id(b1, b2)] = id(g.mul(a1, b1), h.mul(a2, b2));
    return make(n, std::move(tab));
  }

  // Dihedral group of order 2n: element r^i s^j encoded as j*n + i.
  static GroupTable dihedral(int n) {
    const int m = 2 * n;
    auto enc = [&](int i, int j) { return j * n + ((i % n) + n) % n; };
    std::vector<int> tab(m * m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < 2; ++l) {
            // (r^i s^j)(r^k s^l) = r^(i + k or i - k) s^(j xor l)
            int rexp = j == 0 ? i + k : i - k;
            tab[enc(i, j) * m + enc(k, l)] = enc(rexp, j ^ l);
          }
    return make(m, std::move(tab));
  }

  // Quaternion group {1,-1,i,-i,j,-j,k,-k} as 0..7.
  static GroupTable quaternion8() {
    // sign bit in s, axis in a: element = a*2 + s with axes 1,i,j,k.
    auto enc = [](int axis, int s) { return axis * 2 + s; };
    // multiplication of units: table over axes with result axis and sign.
    // sg[a][b]: extra sign when multiplying unit a by unit b (i*j=k, j*i=-k, ...).
    static const int ax[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::vector<int> tab(8 * 8);
    for (int a = 0; a < 4; ++a)
      for (int s = 0; s < 2; ++s)
        for (int b = 0; b < 4; ++b)
          for (int t = 0; t < 2; ++t)
            tab[enc(a, s) * 8 + enc(b, t)] = enc(ax[a][b], (s + t + sg[a][b]) % 2);
    return make(8, std::move(tab));
  }

 private:
  int order_ = 0;
  std::vector<int> tab_;
  std::vector<int> inv_;
};

// A set of permutations of {0, ..., degree-1}; generates a permutation group.
struct PermutationSet {
  int degree = 0;
  std::vector<std::vector<int>> perms;

  static PermutationSet make(int degree, std::vector<std::vector<int>> perms) {
    if (degree <= 0) throw DataError("permutation degree must be positive");
    for (const auto& p : perms) {
      if (static_cast<int>(p.size()) != degree)
        throw DataError("permutation has wrong length");
      std::vector<char> seen(degree, 0);
      for (int v : p) {
        if (v < 0 || v >= degree || seen[v]) throw DataError("not a permutation");
        seen[v] = 1;
      }
    }
    return PermutationSet{degree, std::move(perms)};
  }
};

}  // namespace schemeforge
