#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "schemeforge/errors.hpp"
#include "schemeforge/scheme.hpp"

namespace schemeforge {

inline bool is_commutative(const Scheme& s) {
  const int r = s.n_relations();
  bool commutes = true;
  for (Rel u = 0; u < r && commutes; ++u)
    for (Rel v = u + 1; v < r && commutes; ++v)
      for (Rel w = 0; w < r; ++w)
        if (s.c(u, v, w) != s.c(v, u, w)) {
          commutes = false;
          break;
        }

  // In the p^3 setting the tensor test must agree with the double-coset
  // criterion: commutative iff every class outside the residue is a
  // singleton.  A disagreement is a bug, not a property of the input.
  try {
    const ResidueContext ctx = residue_context(s);
    const Quotient q = quotient_scheme(s, ctx.t);
    std::vector<int> members(q.scheme.n_relations(), 0);
    for (Rel a = 0; a < r; ++a) ++members[q.class_of[a]];
    bool singletons = true;
    for (Rel cls = 1; cls < q.scheme.n_relations(); ++cls)
      if (members[cls] != 1) singletons = false;
    if (commutes != singletons)
      throw EquivalenceFailed(
          "tensor symmetry disagrees with the double-coset criterion");
  } catch (const HypothesisViolation&) {
    // Setting does not apply; the tensor test alone decides.
  }
  return commutes;
}

struct SpectrumEntry {
  int degree = 0;        // d: matrix size of the irreducible block
  int multiplicity = 0;  // m: multiplicity in the standard module
  bool principal = false;
};

struct CharacterSpectrum {
  std::vector<SpectrumEntry> entries;  // sorted by (degree, multiplicity)
  double residual = 0.0;               // worst numeric slop absorbed by rounding
  int attempts = 0;                    // random seeds consumed
};

struct SpectrumOptions {
  std::uint64_t seed = 12345;
  double tol = 1e-8;          // rank cut for the Gram spectra
  double cluster_tol = 1e-6;  // relative eigenvalue gap that separates blocks
  int max_attempts = 5;
};

namespace detail {

// Real basis of the centre of the adjacency algebra, as coefficient
// vectors over the relations.
inline Eigen::MatrixXd centre_basis(const Scheme& s) {
  const int r = s.n_relations();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r) * r, r);
  for (Rel t = 0; t < r; ++t)
    for (Rel u = 0; u < r; ++u)
      for (Rel a = 0; a < r; ++a)
        m(t * r + u, a) = s.c(t, a, u) - s.c(a, t, u);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  return lu.kernel();
}

}  // namespace detail

// Degrees and multiplicities of the irreducible characters of the
// adjacency algebra, computed from the spectrum of a random Hermitian
// central element.  The coefficients are genuinely complex: a real
// symmetric element would merge conjugate pairs of characters.
inline CharacterSpectrum character_spectrum(const Scheme& s, SpectrumOptions opt = {}) {
  using Cplx = std::complex<double>;
  const int n = s.n_points();
  const int r = s.n_relations();
  if (r > 128)
    throw ResourceGuard("character spectrum supports at most 128 relations, got " +
                        std::to_string(r));

  const Eigen::MatrixXd basis = detail::centre_basis(s);
  const int k = static_cast<int>(basis.cols());

  std::string last_error = "no attempts made";
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    std::mt19937_64 rng(opt.seed + attempt);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(r);
    for (int i = 0; i < k; ++i) {
      const Cplx g(unif(rng), unif(rng));
      for (Rel a = 0; a < r; ++a) coeff[a] += g * basis(a, i);
    }
    // Hermitian part; the centre is closed under the adjoint.
    Eigen::VectorXcd h(r);
    for (Rel a = 0; a < r; ++a) h[a] = (coeff[a] + std::conj(coeff[s.dual(a)])) / 2.0;

    Eigen::MatrixXcd central(n, n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) central(x, y) = h[s.at(x, y)];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(central);
    if (es.info() != Eigen::Success) {
      last_error = "eigendecomposition failed";
      continue;
    }
    const Eigen::VectorXd ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double gap = opt.cluster_tol * scale;

    std::vector<std::pair<int, int>> clusters;  // [begin, end)
    int begin = 0;
    for (int i = 1; i <= n; ++i)
      if (i == n || ev[i] - ev[i - 1] > gap) {
        clusters.push_back({begin, i});
        begin = i;
      }
    if (static_cast<int>(clusters.size()) != k) {
      last_error = "eigenvalue clusters (" + std::to_string(clusters.size()) +
                   ") do not match the centre dimension (" + std::to_string(k) + ")";
      continue;
    }

    double residual = 0.0;
    for (const auto& [b, e] : clusters)
      residual = std::max(residual, (ev[e - 1] - ev[b]) / scale);

    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(n);
    CharacterSpectrum result;
    result.attempts = attempt + 1;
    bool good = true;
    int principal_count = 0;
    long long sum_d2 = 0, sum_dm = 0;

    for (const auto& [b, e] : clusters) {
      const int dim = e - b;
      const Eigen::MatrixXcd v = es.eigenvectors().middleCols(b, dim);

      // Gram matrix of the compressed adjacency images v* A_s v.
      std::vector<Eigen::MatrixXcd> comp(r);
      for (Rel a = 0; a < r; ++a) {
        Eigen::MatrixXcd av = Eigen::MatrixXcd::Zero(n, dim);
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            if (s.at(x, y) == a) av.row(x) += v.row(y);
        comp[a] = v.adjoint() * av;
      }
      Eigen::MatrixXcd gram(r, r);
      for (Rel a = 0; a < r; ++a)
        for (Rel bb = 0; bb < r; ++bb)
          gram(a, bb) = (comp[a].adjoint() * comp[bb]).trace();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gs(gram);
      const Eigen::VectorXd gev = gs.eigenvalues();
      const double gmax = std::max(gev.cwiseAbs().maxCoeff(), 1e-300);
      int rank = 0;
      double boundary = 0.0;
      for (int i = 0; i < r; ++i) {
        if (gev[i] > opt.tol * gmax)
          ++rank;
        else
          boundary = std::max(boundary, std::abs(gev[i]) / gmax);
      }
      residual = std::max(residual, boundary);

      const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rank))));
      if (d * d != rank || d == 0 || dim % d != 0) {
        good = false;
        last_error = "block of size " + std::to_string(dim) +
                     " produced a non-square Gram rank " + std::to_string(rank);
        break;
      }
      SpectrumEntry entry;
      entry.degree = d;
      entry.multiplicity = dim / d;
      const double ones_mass = (v.adjoint() * ones).squaredNorm();
      if (ones_mass > 0.5 * n) {
        entry.principal = true;
        ++principal_count;
        residual = std::max(residual, std::abs(ones_mass - n) / n);
      }
      sum_d2 += static_cast<long long>(d) * d;
      sum_dm += static_cast<long long>(d) * entry.multiplicity;
      result.entries.push_back(entry);
    }

    if (!good) continue;
    if (principal_count != 1) {
      last_error = "principal blocks found: " + std::to_string(principal_count);
      continue;
    }
    for (const auto& entry : result.entries)
      if (entry.principal && (entry.degree != 1 || entry.multiplicity != 1)) {
        good = false;
        last_error = "principal block is not one-dimensional";
      }
    if (!good) continue;
    if (sum_d2 != r || sum_dm != n) {
      last_error = "degree sums off: sum d^2 = " + std::to_string(sum_d2) +
                   " (want " + std::to_string(r) + "), sum d*m = " +
                   std::to_string(sum_dm) + " (want " + std::to_string(n) + ")";
      continue;
    }

    std::sort(result.entries.begin(), result.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) {
                if (a.degree != b.degree) return a.degree < b.degree;
                if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
                return a.principal > b.principal;
              });
    result.residual = residual;
    return result;
  }
  throw DecompositionUnstable("character spectrum failed after " +
                        std::to_string(opt.max_attempts) + " attempts: " + last_error);
}

// ---------------------------------------------------------------------------
// Exact linear characters of a thin abelian closed subset.

struct ThinCharacter {
  std::vector<Rel> members;  // of T, ascending
  std::vector<int> exps;     // value at members[i] is exp(2*pi*I * exps[i] / modulus)
  int modulus = 1;
  std::vector<Rel> kernel;   // members with value 1

  bool principal() const {
    for (int e : exps)
      if (e != 0) return false;
    return true;
  }

  std::complex<double> value(int pos) const {
    const double t = 2.0 * 3.141592653589793238462643383279502884 * exps[pos] / modulus;
    return {std::cos(t), std::sin(t)};
  }

  // e_phi = (1/|T|) sum_t conj(phi(t)) A_t, an idempotent of the adjacency
  // algebra.
  Eigen::MatrixXcd idempotent(const Scheme& s) const {
    const int n = s.n_points();
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
    std::vector<std::complex<double>> val(s.n_relations(), 0.0);
    std::vector<char> in(s.n_relations(), 0);
    for (size_t i = 0; i < members.size(); ++i) {
      val[members[i]] = std::conj(value(static_cast<int>(i)));
      in[members[i]] = 1;
    }
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (in[s.at(x, y)]) e(x, y) = val[s.at(x, y)];
    return e / static_cast<double>(members.size());
  }
};

// All |T| linear characters of a thin abelian closed subset, enumerated
// deterministically.  Throws NotThin / NotAbelian.
inline std::vector<ThinCharacter> thin_abelian_characters(const Scheme& s,
                                                          const ClosedSubset& t) {
  const ThinGroupType type = thin_group_type(s, t);
  if (!type.is_group())
    throw NotThin("closed subset has a member of valency > 1");
  if (!type.table.is_abelian())
    throw NotAbelian("closed subset is thin but not abelian");
  const GroupTable& g = type.table;
  const int k = g.order();
  const int m = g.exponent();

  // Greedy generators: first element outside the running subgroup.
  std::vector<int> gens;
  std::vector<char> known(k, 0);
  known[0] = 1;
  auto grow = [&](int gen) {
    // close the known set under multiplication by gen
    std::vector<int> added;
    for (int x = 0; x < k; ++x) {
      if (!known[x]) continue;
      int y = x;
      for (int j = 1; j < g.element_order(gen); ++j) {
        y = g.mul(y, gen);
        if (!known[y]) {
          known[y] = 1;
          added.push_back(y);
        }
      }
    }
    return added;
  };
  for (int a = 1; a < k; ++a)
    if (!known[a]) {
      gens.push_back(a);
      grow(a);
    }

  std::vector<ThinCharacter> out;
  std::vector<int> exps(k, -1);
  exps[0] = 0;

  std::function<void(size_t, std::vector<int>&)> rec = [&](size_t level,
                                                           std::vector<int>& have) {
    if (level == gens.size()) {
      ThinCharacter chi;
      chi.members = t.members;
      chi.modulus = m;
      chi.exps.resize(k);
      for (int i = 0; i < k; ++i) chi.exps[i] = exps[i];
      for (int i = 0; i < k; ++i)
        if (exps[i] == 0) chi.kernel.push_back(t.members[i]);
      out.push_back(std::move(chi));
      return;
    }
    const int gen = gens[level];
    const int o = g.element_order(gen);
    for (int j = 0; j < o; ++j) {
      const int e_gen = j * (m / o);
      std::vector<int> touched;
      bool ok = true;
      for (size_t hi = 0; hi < have.size() && ok; ++hi) {
        const int x = have[hi];
        int y = x, e = exps[x];
        for (int pw = 1; pw < o && ok; ++pw) {
          y = g.mul(y, gen);
          e = (e + e_gen) % m;
          if (exps[y] < 0) {
            exps[y] = e;
            touched.push_back(y);
            have.push_back(y);
          } else if (exps[y] != e) {
            ok = false;
          }
        }
      }
      if (ok) rec(level + 1, have);
      for (int y : touched) exps[y] = -1;
      have.resize(have.size() - touched.size());
    }
  };
  std::vector<int> have{0};
  rec(0, have);

  if (static_cast<int>(out.size()) != k)
    throw SchemeError("internal: character enumeration found " +
                      std::to_string(out.size()) + " of " + std::to_string(k));
  return out;
}

// Degrees of the characters induced from the linear characters of the
// residue, computed exactly: the degree for a nontrivial character is one
// plus the number of non-identity double-coset classes whose left
// stabilizer equals its kernel.
struct InducedDegrees {
  std::vector<ThinCharacter> characters;  // all |T| characters of the residue
  std::vector<int> degrees;               // aligned with `characters`
  std::set<int> degree_set;               // nontrivial-character values > 1
};

inline InducedDegrees induced_degrees(const Scheme& s) {
  const ResidueContext ctx = residue_context(s);
  const ClassStabilizers cs = class_stabilizers(s, ctx.t);

  InducedDegrees out;
  out.characters = thin_abelian_characters(s, ctx.t);
  for (const ThinCharacter& chi : out.characters) {
    if (chi.principal()) {
      out.degrees.push_back(1);
      continue;
    }
    int deg = 1;
    for (Rel cls = 1; cls < cs.quotient.scheme.n_relations(); ++cls)
      if (cs.stabilizer[cls] == chi.kernel) ++deg;
    out.degrees.push_back(deg);
    if (deg > 1) out.degree_set.insert(deg);
  }
  return out;
}

// Degrees above 1 among the characters induced from the residue; empty
// exactly when the scheme is commutative (no lines in its geometry).
inline std::set<int> induced_degree_set(const Scheme& s) {
  return induced_degrees(s).degree_set;
}

inline std::set<int> induced_degree_set(const Scheme& s, const ClosedSubset& t) {
  if (!(t == residue_context(s).t))
    throw HypothesisViolation("subset is not the thin residue");
  return induced_degrees(s).degree_set;
}

// Counts the spectrum entries with degree equal to multiplicity; these are
// exactly the characters that factor through the quotient by the thin
// residue, so the count must match the quotient's character count.
struct QuotientCharacterCheck {
  int matching_entries = 0;     // entries of the spectrum with d == m
  int quotient_characters = 0;  // entries of the quotient's spectrum
  bool consistent = false;
};

inline QuotientCharacterCheck quotient_character_check(const Scheme& s,
                                                       SpectrumOptions opt = {}) {
  const auto spec = character_spectrum(s, opt);
  const auto q = quotient_scheme(s, thin_residue(s));
  const auto qspec = character_spectrum(q.scheme, opt);
  QuotientCharacterCheck out;
  for (const auto& e : spec.entries)
    if (e.degree == e.multiplicity) ++out.matching_entries;
  out.quotient_characters = static_cast<int>(qspec.entries.size());
  out.consistent = out.matching_entries == out.quotient_characters;
  return out;
}

// Relations a with e_phi * A_a nonzero (largest entry magnitude > tol).
inline std::vector<Rel> induced_support_relations(const Scheme& s,
                                                  const ThinCharacter& chi,
                                                  double tol = 1e-8) {
  const int n = s.n_points();
  const Eigen::MatrixXcd e = chi.idempotent(s);
  std::vector<Rel> out;
  for (Rel a = 0; a < s.n_relations(); ++a) {
    // Column y of e * A_a is the sum of the columns of e indexed by the
    // points mapping to y under a.
    double peak = 0.0;
    for (int y = 0; y < n; ++y) {
      Eigen::VectorXcd colsum = Eigen::VectorXcd::Zero(n);
      for (int z = 0; z < n; ++z)
        if (s.at(z, y) == a) colsum += e.col(z);
      peak = std::max(peak, colsum.cwiseAbs().maxCoeff());
    }
    if (peak > tol) out.push_back(a);
  }
  return out;
}

// Quotient classes meeting the module induced from a character of the thin
// residue: { class of a : e_phi * A_a != 0 }.  Requires the p^3 setting and
// t equal to the residue.  For a nontrivial character the numeric support
// is re-derived exactly from left stabilizers (outside t, the product is
// nonzero iff L(a) = Ker phi); a disagreement throws EquivalenceFailed.
inline std::set<Rel> induced_support(const Scheme& s, const ClosedSubset& t,
                                     const ThinCharacter& chi,
                                     double tol = 1e-8) {
  const ResidueContext ctx = residue_context(s);
  if (!(t == ctx.t))
    throw HypothesisViolation("subset is not the thin residue");

  const Quotient q = quotient_scheme(s, t);
  const std::vector<Rel> raw = induced_support_relations(s, chi, tol);
  std::vector<char> in_raw(s.n_relations(), 0);
  for (Rel a : raw) in_raw[a] = 1;

  if (!chi.principal()) {
    for (Rel a = 0; a < s.n_relations(); ++a) {
      if (t.contains(a)) continue;
      const bool exact = left_stabilizer(s, t, a) == chi.kernel;
      if (exact != static_cast<bool>(in_raw[a]))
        throw EquivalenceFailed(
            "numeric support disagrees with the left-stabilizer test at "
            "relation " +
            std::to_string(a));
    }
  }

  std::set<Rel> out;
  for (Rel a : raw) out.insert(q.class_of[a]);
  return out;
}

}  // namespace schemeforge
