#pragma once

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "schemeforge/constructors.hpp"
#include "schemeforge/errors.hpp"
#include "schemeforge/morphisms.hpp"
#include "schemeforge/scheme.hpp"

namespace schemeforge {

// Relabels the relations of T inside each coset block by a per-coset
// automorphism of T (given over member positions, position 0 fixed).
// Relations between different cosets are untouched.
struct TwistSpec {
  ClosedSubset t;
  std::vector<std::vector<int>> iotas;  // one per coset block
};

struct TwistResult {
  Scheme scheme;       // same relation indices as the base scheme
  bool tensor_equal;   // identity relation map is an algebraic isomorphism
};

inline TwistResult apply_twist(const Scheme& base, const TwistSpec& spec) {
  const int n = base.n_points();
  const int k = spec.t.size();
  const Cosets co = cosets(base, spec.t);
  if (spec.iotas.size() != co.blocks.size())
    throw DataError("twist needs one relabeling per coset (" +
                    std::to_string(co.blocks.size()) + ")");
  for (const auto& iota : spec.iotas) {
    if (static_cast<int>(iota.size()) != k || iota[0] != 0)
      throw DataError("coset relabeling must permute the member positions and fix 0");
    std::vector<char> seen(k, 0);
    for (int v : iota) {
      if (v < 0 || v >= k || seen[v]) throw DataError("coset relabeling is not a permutation");
      seen[v] = 1;
    }
  }

  std::vector<int> pos(base.n_relations(), -1);
  for (int i = 0; i < k; ++i) pos[spec.t.members[i]] = i;

  std::vector<int32_t> mat = base.matrix();
  for (size_t j = 0; j < co.blocks.size(); ++j) {
    const auto& iota = spec.iotas[j];
    bool identity = true;
    for (int i = 0; i < k; ++i)
      if (iota[i] != i) identity = false;
    if (identity) continue;
    for (int x : co.blocks[j])
      for (int y : co.blocks[j]) {
        const int p = pos[mat[x * n + y]];
        if (p < 0) throw SchemeError("internal: coset pair outside the closed subset");
        mat[x * n + y] = spec.t.members[iota[p]];
      }
  }

  TwistResult out{verify_scheme(n, mat), true};
  const int r = base.n_relations();
  for (Rel u = 0; u < r && out.tensor_equal; ++u)
    for (Rel v = 0; v < r && out.tensor_equal; ++v)
      for (Rel w = 0; w < r; ++w)
        if (base.c(u, v, w) != out.scheme.c(u, v, w)) {
          out.tensor_equal = false;
          break;
        }
  return out;
}

// First automorphism of T (fixing H pointwise) that carries `from` to `to`
// and extends to the whole tensor by the identity; nullopt when none does.
inline std::optional<std::vector<int>> find_fixing_automorphism(const Scheme& s,
                                                                const ClosedSubset& t,
                                                                const ClosedSubset& h,
                                                                Rel from, Rel to) {
  std::vector<int> pos(s.n_relations(), -1);
  for (int i = 0; i < t.size(); ++i) pos[t.members[i]] = i;
  if (pos[from] < 0 || pos[to] < 0) return std::nullopt;
  for (const auto& iota : closed_subset_automorphisms(s, t)) {
    if (iota[pos[from]] != pos[to]) continue;
    const auto cert = check_extension(s, t, h, iota);
    if (cert.ok()) return iota;
  }
  return std::nullopt;
}

// Full certificate for the twisted-scheme construction at a given p: the
// base scheme and its one-coset twist agree on all intersection numbers,
// yet exhaustive search separates them as point spaces, and only the base
// has an automorphism group rich enough to cut every relation as an
// orbital.
struct NonSchurianCertificate {
  int p = 0;
  Scheme base;
  Scheme twisted;
  ClosedSubset t, h;
  Rel s1 = -1;        // least relation outside T
  Rel t1 = -1;        // least relation in T outside H
  Rel t1_sq = -1;     // the unique relation in the product t1 t1
  std::vector<int> iota;  // member-position automorphism used for the twist
  int twisted_coset = -1;

  bool alg_isomorphic = false;
  bool point_isomorphic = false;
  bool schurian_base = false;
  bool schurian_twist = false;
  SchurianReport base_report, twist_report;

  double ms_build = 0, ms_isomorphism = 0, ms_schurian = 0;

  bool demonstrates_non_schurian() const {
    return alg_isomorphic && !point_isomorphic && schurian_base && !schurian_twist;
  }
};

inline NonSchurianCertificate nonschurian_pipeline(int p, bool allow_slow = false,
                                                   std::ostream* progress = nullptr) {
  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  if (!is_odd_prime(p)) throw NotOddPrime(p);
  if (p > 5 && !allow_slow)
    throw ResourceGuard("pipeline at p = " + std::to_string(p) +
                        " requires the slow opt-in (exhaustive searches)");

  NonSchurianCertificate cert;
  cert.p = p;
  auto t0 = clock::now();
  Ex41 ex = example41(p, /*allow_large=*/true);
  cert.base = std::move(ex.scheme);
  cert.t = std::move(ex.t);
  cert.h = std::move(ex.h);

  for (Rel u = 0; u < cert.base.n_relations() && cert.s1 < 0; ++u)
    if (!cert.t.contains(u)) cert.s1 = u;
  for (Rel u : cert.t.members)
    if (!cert.h.contains(u)) {
      cert.t1 = u;
      break;
    }
  const auto sq = complex_product(cert.base, {cert.t1}, {cert.t1});
  if (sq.size() != 1)
    throw SchemeError("internal: product t1 t1 is not a single relation");
  cert.t1_sq = sq[0];
  if (cert.t1_sq == cert.t1)
    throw SchemeError("internal: t1 squared equals t1; no twist available");

  auto iota = find_fixing_automorphism(cert.base, cert.t, cert.h, cert.t1_sq, cert.t1);
  if (!iota) throw SchemeError("internal: no extending automorphism moves t1^2 to t1");
  cert.iota = *iota;

  const Cosets co = cosets(cert.base, cert.t);
  cert.twisted_coset = co.block_of[1];
  if (cert.twisted_coset == co.block_of[0])
    throw SchemeError("internal: twisted coset equals the base coset");

  TwistSpec spec;
  spec.t = cert.t;
  std::vector<int> identity(cert.t.size());
  for (int i = 0; i < cert.t.size(); ++i) identity[i] = i;
  spec.iotas.assign(co.blocks.size(), identity);
  spec.iotas[cert.twisted_coset] = cert.iota;

  TwistResult tw = apply_twist(cert.base, spec);
  cert.twisted = std::move(tw.scheme);
  cert.alg_isomorphic = tw.tensor_equal;
  cert.ms_build = ms_since(t0);
  if (progress) *progress << "built base and twist in " << cert.ms_build << " ms\n";

  t0 = clock::now();
  cert.point_isomorphic = find_isomorphism(cert.base, cert.twisted).has_value();
  cert.ms_isomorphism = ms_since(t0);
  if (progress)
    *progress << "isomorphism search finished in " << cert.ms_isomorphism << " ms: "
              << (cert.point_isomorphic ? "found" : "none") << "\n";

  t0 = clock::now();
  cert.base_report = is_schurian(cert.base);
  cert.twist_report = is_schurian(cert.twisted);
  cert.schurian_base = cert.base_report.schurian;
  cert.schurian_twist = cert.twist_report.schurian;
  cert.ms_schurian = ms_since(t0);
  if (progress)
    *progress << "orbital counts " << cert.base_report.orbitals << " / "
              << cert.twist_report.orbitals << " of " << cert.base.n_relations()
              << " in " << cert.ms_schurian << " ms\n";
  return cert;
}

}  // namespace schemeforge
