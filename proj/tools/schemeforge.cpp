// Command line front end: generate, inspect and transform association
// schemes backed by the schemeforge headers.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "schemeforge/schemeforge.hpp"

namespace sf = schemeforge;

namespace {

// exit codes: 0 success / affirmative, 1 negative answer, 2 usage,
// 3 bad data, 4 resource guard
constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;
constexpr int kData = 3;
constexpr int kGuard = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

sf::GroupTable group_by_name(const std::string& name) {
  sf::GroupTable out = sf::GroupTable::cyclic(1);
  size_t start = 0;
  bool first = true;
  while (start <= name.size()) {
    size_t end = name.find('x', start);
    if (end == std::string::npos) end = name.size();
    const std::string tok = name.substr(start, end - start);
    sf::GroupTable g = sf::GroupTable::cyclic(1);
    if (tok == "q8") {
      g = sf::GroupTable::quaternion8();
    } else if (tok.size() > 1 && (tok[0] == 'c' || tok[0] == 'd')) {
      int n = 0;
      try {
        n = std::stoi(tok.substr(1));
      } catch (const std::exception&) {
        throw UsageError("cannot parse group token '" + tok + "'");
      }
      if (n <= 0 || n > 1024) throw UsageError("group order out of range in '" + tok + "'");
      g = tok[0] == 'c' ? sf::GroupTable::cyclic(n) : sf::GroupTable::dihedral(n);
    } else {
      throw UsageError("unknown group '" + tok + "' (use cN, dN, q8, or products like c3xc3)");
    }
    out = first ? g : sf::GroupTable::direct_product(out, g);
    first = false;
    start = end + 1;
  }
  return out;
}

std::string valency_summary(const sf::Scheme& s) {
  std::map<int, int> hist;
  for (sf::Rel u = 0; u < s.n_relations(); ++u) ++hist[s.valency(u)];
  std::ostringstream out;
  bool sep = false;
  for (const auto& [v, k] : hist) {
    if (sep) out << ", ";
    out << k << " of valency " << v;
    sep = true;
  }
  return out.str();
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-")
    std::cout << contents;
  else
    sf::write_file(path, contents);
}

sf::Json members_json(const std::vector<sf::Rel>& rels) {
  return sf::Json(rels);
}

std::vector<int> parse_perm(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw UsageError("cannot parse permutation entry '" + tok + "'");
    }
  }
  if (out.empty()) throw UsageError("empty permutation");
  return out;
}

std::string group_type_tag(const sf::ThinGroupType& t) {
  switch (t.kind) {
    case sf::GroupKind::NotAGroup: return "NotAGroup";
    case sf::GroupKind::Trivial: return "Trivial";
    case sf::GroupKind::Cyclic: return "Cyclic";
    case sf::GroupKind::ElementaryAbelian: return "ElementaryAbelian";
    case sf::GroupKind::AbelianOther: return "Abelian";
    case sf::GroupKind::NonAbelian: return "NonAbelian";
  }
  return "?";
}

sf::Json group_type_json(const sf::ThinGroupType& t) {
  sf::Json j;
  j["kind"] = group_type_tag(t);
  j["members"] = t.members;
  j["valency_sum"] = t.valency_sum;
  if (t.is_group())
    j["order"] = t.order;
  else
    j["order"] = nullptr;
  return j;
}

std::string group_type_text(const sf::ThinGroupType& t) {
  std::ostringstream out;
  switch (t.kind) {
    case sf::GroupKind::NotAGroup:
      out << "NotAGroup (" << t.members << " members, valency sum " << t.valency_sum
          << ")";
      break;
    case sf::GroupKind::Trivial:
      out << "trivial group";
      break;
    case sf::GroupKind::Cyclic:
      out << "C" << t.order;
      break;
    case sf::GroupKind::ElementaryAbelian: {
      const int p = t.table.exponent();
      int k = 0;
      for (int n = t.order; n > 1; n /= p) ++k;
      out << "C" << p;
      if (k > 1) out << "^" << k;
      break;
    }
    case sf::GroupKind::AbelianOther:
      out << "abelian of order " << t.order << ", exponent " << t.table.exponent();
      break;
    case sf::GroupKind::NonAbelian:
      out << "nonabelian of order " << t.order;
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------- gen ----

int run_gen(const std::string& family, int p, const std::string& group_name,
            const std::string& left, const std::string& right, int degree,
            const std::vector<std::string>& perm_texts, bool allow_large,
            const std::string& out_path) {
  sf::Scheme scheme = sf::group_scheme(sf::GroupTable::cyclic(1));
  std::map<std::string, std::vector<sf::Rel>> labels;
  sf::Json prov;
  prov["generator"] = family;

  if (family == "exfour") {
    auto ex = sf::example41(p, allow_large);
    scheme = std::move(ex.scheme);
    labels["H"] = ex.h.members;
    labels["T"] = ex.t.members;
    prov["p"] = p;
  } else if (family == "heisenberg") {
    auto fx = sf::fixture_heisenberg(p, allow_large);
    scheme = std::move(fx.scheme);
    labels["T"] = fx.t.members;
    prov["p"] = p;
  } else if (family == "group") {
    if (group_name.empty()) throw UsageError("gen group needs --name");
    scheme = sf::group_scheme(group_by_name(group_name));
    prov["name"] = group_name;
  } else if (family == "wreath") {
    if (left.empty() || right.empty())
      throw UsageError("gen wreath needs --left and --right");
    scheme = sf::wreath_product(sf::group_scheme(group_by_name(left)),
                                sf::group_scheme(group_by_name(right)));
    prov["left"] = left;
    prov["right"] = right;
  } else if (family == "orbital") {
    if (degree <= 0) throw UsageError("gen orbital needs --degree");
    if (perm_texts.empty()) throw UsageError("gen orbital needs at least one --perm");
    std::vector<std::vector<int>> perms;
    for (const auto& text : perm_texts) perms.push_back(parse_perm(text));
    scheme = sf::orbital_scheme(sf::PermutationSet::make(degree, perms));
    prov["degree"] = degree;
    prov["perms"] = perms;
  } else {
    throw UsageError("unknown family '" + family +
                     "' (exfour, heisenberg, group, wreath, orbital)");
  }

  emit(out_path, sf::scheme_to_json(scheme, labels, prov).dump(1) + "\n");
  std::cerr << "generated " << family << ": " << scheme.n_points() << " points, "
            << scheme.n_relations() << " relations\n";
  return kOk;
}

// ------------------------------------------------------------- verify ----

int run_verify(const std::string& path) {
  auto data = sf::read_scheme(path);
  std::cout << "valid scheme: " << data.scheme.n_points() << " points, "
            << data.scheme.n_relations() << " relations (" << valency_summary(data.scheme)
            << ")\n";
  return kOk;
}

// ------------------------------------------------------------ analyze ----

int run_analyze(const std::string& path, std::uint64_t seed, double tol, bool as_json) {
  auto data = sf::read_scheme(path);
  const sf::Scheme& s = data.scheme;
  auto radical = sf::thin_radical(s);
  auto residue = sf::thin_residue(s);
  const auto residue_type = sf::thin_group_type(s, residue);
  const bool commutative = sf::is_commutative(s);
  const bool normal = sf::is_strongly_normal(s, residue);

  sf::SpectrumOptions opt;
  opt.seed = seed;
  opt.tol = tol;
  const auto spectrum = sf::character_spectrum(s, opt);

  sf::Json j;
  j["points"] = s.n_points();
  j["relations"] = s.n_relations();
  j["valencies"] = s.valencies();
  j["thin"] = s.is_thin();
  j["commutative"] = commutative;
  j["thin_radical"] = members_json(radical.members);
  j["thin_residue"] = members_json(residue.members);
  j["residue_group"] = group_type_json(residue_type);
  j["radical_equals_residue"] = radical == residue;
  j["residue_strongly_normal"] = normal;
  std::string quotient_text;
  if (normal) {
    auto q = sf::quotient_scheme(s, residue);
    j["quotient_points"] = q.scheme.n_points();
    j["quotient_relations"] = q.scheme.n_relations();
    const auto qtype = sf::thin_group_type(q.scheme, sf::full_subset(q.scheme));
    j["quotient_group"] = group_type_json(qtype);
    quotient_text = qtype.is_group() ? group_type_text(qtype)
                                     : std::to_string(q.scheme.n_points()) + " points";
  }

  sf::Json entries = sf::Json::array();
  for (const auto& e : spectrum.entries)
    entries.push_back(sf::Json{{"degree", e.degree}, {"multiplicity", e.multiplicity}});
  j["spectrum"] = std::move(entries);

  // In the p^3 setting, compare the line sizes of the coset geometry with
  // the spectrum degrees above 1 (they are predicted to coincide).
  std::string match_text;
  try {
    auto ctx = sf::residue_context(s);
    j["residue_prime"] = ctx.p;
    auto pls = sf::partial_linear_space(s);
    std::set<int> line_sizes;
    for (const auto& l : pls.lines) line_sizes.insert(static_cast<int>(l.points.size()));
    std::set<int> big_degrees;
    for (const auto& e : spectrum.entries)
      if (e.degree > 1) big_degrees.insert(e.degree);
    const auto induced = sf::induced_degree_set(s, ctx.t);
    const bool match = line_sizes == big_degrees && induced == big_degrees;
    sf::Json geo;
    geo["lines"] = pls.lines.size();
    geo["line_sizes"] = std::vector<int>(line_sizes.begin(), line_sizes.end());
    geo["spectrum_degrees_above_one"] =
        std::vector<int>(big_degrees.begin(), big_degrees.end());
    geo["induced_degree_set"] = std::vector<int>(induced.begin(), induced.end());
    geo["degree_line_match"] = match ? "PASS" : "FAIL";
    j["geometry"] = std::move(geo);
    std::ostringstream m;
    m << "degree/line match: " << (match ? "PASS" : "FAIL") << " (" << pls.lines.size()
      << " lines, sizes {";
    bool sep = false;
    for (int v : line_sizes) {
      if (sep) m << ",";
      m << v;
      sep = true;
    }
    m << "})";
    match_text = m.str();
  } catch (const sf::HypothesisViolation&) {
    j["residue_prime"] = nullptr;
    j["geometry"] = nullptr;
  }

  if (as_json) {
    std::cout << j.dump(1) << "\n";
    return kOk;
  }
  std::cout << "points:      " << s.n_points() << "\n"
            << "relations:   " << s.n_relations() << " (" << valency_summary(s) << ")\n"
            << "thin:        " << (s.is_thin() ? "yes" : "no") << "\n"
            << "commutative: " << (commutative ? "yes" : "no") << "\n"
            << "radical:     " << radical.size() << " relations\n"
            << "residue:     " << residue.size() << " relations"
            << (radical == residue ? " (equals radical)" : "") << ", "
            << group_type_text(residue_type) << "\n";
  if (normal)
    std::cout << "quotient:    " << quotient_text << "\n";
  std::cout << "spectrum:   ";
  for (const auto& e : spectrum.entries)
    std::cout << " " << e.degree << "x" << e.multiplicity;
  std::cout << "\n";
  if (!j["residue_prime"].is_null())
    std::cout << "residue prime: " << j["residue_prime"].get<int>() << "\n";
  if (!match_text.empty()) std::cout << match_text << "\n";
  return kOk;
}

// ---------------------------------------------------------------- pls ----

int run_pls(const std::string& path, bool as_json) {
  auto data = sf::read_scheme(path);
  auto pls = sf::partial_linear_space(data.scheme);
  auto report = sf::validate_pls(pls);
  const bool linear = report.ok && sf::is_linear_space(pls);

  sf::Json j;
  j["points"] = pls.num_points;
  j["p"] = pls.p;
  sf::Json lines = sf::Json::array();
  for (const auto& l : pls.lines) {
    sf::Json jl;
    jl["points"] = l.points;
    jl["stabilizer"] = members_json(l.stabilizer);
    lines.push_back(std::move(jl));
  }
  j["lines"] = std::move(lines);
  j["valencies_one_p"] = pls.valencies_one_p;
  j["valid"] = report.ok;
  j["violations"] = report.violations;
  j["linear_space"] = linear;
  try {
    auto df = sf::difference_family_from_scheme(data.scheme);
    sf::Json jd;
    jd["group_order"] = df.group.order();
    jd["base_blocks"] = df.base_blocks;
    if (df.lambda)
      jd["lambda"] = *df.lambda;
    else
      jd["lambda"] = nullptr;
    j["difference_family"] = std::move(jd);
  } catch (const sf::SchemeError& e) {
    j["difference_family"] = nullptr;
    j["difference_family_error"] = e.what();
  }

  if (as_json) {
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "quotient points: " << pls.num_points << "\n"
              << "lines: " << pls.lines.size() << "\n";
    for (const auto& l : pls.lines) {
      std::cout << "  {";
      for (size_t i = 0; i < l.points.size(); ++i)
        std::cout << (i ? " " : "") << l.points[i];
      std::cout << "}\n";
    }
    std::cout << "valid: " << (report.ok ? "yes" : "no") << "\n";
    for (const auto& v : report.violations) std::cout << "  violation: " << v << "\n";
    std::cout << "linear space: " << (linear ? "yes" : "no") << "\n";
    if (!j["difference_family"].is_null()) {
      std::cout << "difference family blocks: " << j["difference_family"]["base_blocks"].dump()
                << " lambda: " << j["difference_family"]["lambda"].dump() << "\n";
    }
  }
  return report.ok ? kOk : kNo;
}

// -------------------------------------------------------------- chars ----

int run_chars(const std::string& path, std::uint64_t seed, double tol, bool as_json) {
  auto data = sf::read_scheme(path);
  sf::SpectrumOptions opt;
  opt.seed = seed;
  opt.tol = tol;
  auto spec = sf::character_spectrum(data.scheme, opt);

  sf::Json j;
  sf::Json entries = sf::Json::array();
  for (const auto& e : spec.entries) {
    sf::Json je;
    je["degree"] = e.degree;
    je["multiplicity"] = e.multiplicity;
    je["principal"] = e.principal;
    entries.push_back(std::move(je));
  }
  j["spectrum"] = std::move(entries);
  j["residual"] = spec.residual;
  j["attempts"] = spec.attempts;

  try {
    auto ind = sf::induced_degrees(data.scheme);
    j["induced_degrees"] = ind.degrees;
    j["induced_degree_set"] = std::vector<int>(ind.degree_set.begin(), ind.degree_set.end());
    auto qc = sf::quotient_character_check(data.scheme, opt);
    sf::Json jq;
    jq["matching_entries"] = qc.matching_entries;
    jq["quotient_characters"] = qc.quotient_characters;
    jq["consistent"] = qc.consistent;
    j["quotient_check"] = std::move(jq);
  } catch (const sf::HypothesisViolation&) {
    j["induced_degrees"] = nullptr;
  }

  if (as_json) {
    std::cout << j.dump(1) << "\n";
    return kOk;
  }
  std::cout << "irreducible blocks (degree x multiplicity):\n";
  for (const auto& e : spec.entries)
    std::cout << "  " << e.degree << " x " << e.multiplicity
              << (e.principal ? "  (principal)" : "") << "\n";
  std::cout << "residual: " << spec.residual << "  attempts: " << spec.attempts << "\n";
  if (!j["induced_degrees"].is_null()) {
    std::cout << "induced degrees over the residue:";
    for (int d : j["induced_degrees"].get<std::vector<int>>()) std::cout << " " << d;
    std::cout << "\nquotient check: " << j["quotient_check"]["matching_entries"].get<int>()
              << " of " << j["quotient_check"]["quotient_characters"].get<int>()
              << (j["quotient_check"]["consistent"].get<bool>() ? " (consistent)"
                                                                : " (MISMATCH)")
              << "\n";
  }
  return kOk;
}

// -------------------------------------------------------------- twist ----

int run_twist(const std::string& path, int coset, const std::string& out_path) {
  auto data = sf::read_scheme(path);
  auto t = sf::thin_residue(data.scheme);
  auto h = sf::thin_radical(data.scheme);
  if (t.size() <= 1 || t.size() == data.scheme.n_relations()) {
    std::cout << "thin residue is trivial or everything; no coset to twist\n";
    return kNo;
  }

  sf::Rel t1 = -1;
  for (sf::Rel u : t.members)
    if (!h.contains(u)) {
      t1 = u;
      break;
    }
  if (t1 < 0) {
    std::cout << "no residue relation outside the radical; nothing to twist\n";
    return kNo;
  }
  auto sq = sf::complex_product(data.scheme, {t1}, {t1});
  if (sq.size() != 1 || sq[0] == t1) {
    std::cout << "squaring the first residue relation does not select a twist\n";
    return kNo;
  }
  auto iota = sf::find_fixing_automorphism(data.scheme, t, h, sq[0], t1);
  if (!iota) {
    std::cout << "no extending automorphism of the residue moves " << sq[0] << " to "
              << t1 << "\n";
    return kNo;
  }

  const sf::Cosets co = sf::cosets(data.scheme, t);
  if (coset < 0) coset = co.block_of[1];
  if (coset >= static_cast<int>(co.blocks.size()))
    throw UsageError("--coset out of range (have " + std::to_string(co.blocks.size()) +
                     " cosets)");

  sf::TwistSpec spec;
  spec.t = t;
  std::vector<int> identity(t.size());
  for (int i = 0; i < t.size(); ++i) identity[i] = i;
  spec.iotas.assign(co.blocks.size(), identity);
  spec.iotas[coset] = *iota;

  auto tw = sf::apply_twist(data.scheme, spec);
  sf::Json prov = data.provenance;
  prov["twisted_coset"] = coset;
  prov["iota"] = *iota;
  emit(out_path, sf::scheme_to_json(tw.scheme, data.labels, prov).dump(1) + "\n");
  std::cerr << "twisted coset " << coset << " with relabeling "
            << sf::Json(*iota).dump() << "; tensor preserved: "
            << (tw.tensor_equal ? "yes" : "no") << "\n";
  return kOk;
}

// ---------------------------------------------------------------- iso ----

int run_iso(const std::string& path_a, const std::string& path_b, bool as_json) {
  auto a = sf::read_scheme(path_a);
  auto b = sf::read_scheme(path_b);
  auto iso = sf::find_isomorphism(a.scheme, b.scheme);
  if (as_json) {
    sf::Json j;
    j["isomorphic"] = iso.has_value();
    if (iso) {
      j["relations"] = iso->rho;
      j["points"] = iso->point_map;
    }
    std::cout << j.dump(1) << "\n";
  } else if (iso) {
    std::cout << "FOUND\nrelation map: " << sf::Json(iso->rho).dump()
              << "\npoint map: " << sf::Json(iso->point_map).dump() << "\n";
  } else {
    std::cout << "NONE (exhaustive search)\n";
  }
  return iso ? kOk : kNo;
}

// ----------------------------------------------------------- schurian ----

int run_schurian(const std::string& path, bool as_json) {
  auto data = sf::read_scheme(path);
  auto rep = sf::is_schurian(data.scheme);
  if (as_json) {
    sf::Json j;
    j["schurian"] = rep.schurian;
    j["aut_order"] = rep.aut_order;
    j["orbitals"] = rep.orbitals;
    j["relations"] = rep.relations;
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "automorphisms: " << rep.aut_order << "\norbitals: " << rep.orbitals
              << " of " << rep.relations << " relations\nschurian: "
              << (rep.schurian ? "YES" : "NO") << "\n";
  }
  return rep.schurian ? kOk : kNo;
}

// ----------------------------------------------------------- pipeline ----

int run_pipeline(int p, bool allow_slow, const std::string& out_dir, bool quiet) {
  auto cert = sf::nonschurian_pipeline(p, allow_slow, quiet ? nullptr : &std::cerr);

  sf::Json j;
  j["p"] = cert.p;
  j["s1"] = cert.s1;
  j["t1"] = cert.t1;
  j["t1_sq"] = cert.t1_sq;
  j["iota"] = cert.iota;
  j["twisted_coset"] = cert.twisted_coset;
  j["alg_isomorphic"] = cert.alg_isomorphic;
  j["point_isomorphic"] = cert.point_isomorphic;
  j["schurian_base"] = cert.schurian_base;
  j["schurian_twist"] = cert.schurian_twist;
  j["base_aut_order"] = cert.base_report.aut_order;
  j["twist_aut_order"] = cert.twist_report.aut_order;
  j["base_orbitals"] = cert.base_report.orbitals;
  j["twist_orbitals"] = cert.twist_report.orbitals;
  j["demonstrates_non_schurian"] = cert.demonstrates_non_schurian();
  sf::Json timings;
  timings["build"] = cert.ms_build;
  timings["isomorphism"] = cert.ms_isomorphism;
  timings["schurian"] = cert.ms_schurian;
  j["timings_ms"] = std::move(timings);

  if (!out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    sf::write_scheme_json((dir / "scheme_base.json").string(), cert.base,
                          {{"H", cert.h.members}, {"T", cert.t.members}},
                          sf::Json{{"generator", "exfour"}, {"p", p}});
    sf::Json tprov{{"generator", "exfour-twist"}, {"p", p}};
    tprov["iota"] = cert.iota;
    tprov["twisted_coset"] = cert.twisted_coset;
    sf::write_scheme_json((dir / "scheme_twisted.json").string(), cert.twisted,
                          {{"H", cert.h.members}, {"T", cert.t.members}}, tprov);
    sf::write_file((dir / "certificate.json").string(), j.dump(1) + "\n");
  }

  std::cout << j.dump(1) << "\n";
  return cert.demonstrates_non_schurian() ? kOk : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construct, verify and analyze association schemes of order p^3"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a scheme and write it as JSON");
  std::string family, group_name, wreath_left, wreath_right, gen_out;
  int gen_p = 3, orbital_degree = 0;
  std::vector<std::string> orbital_perms;
  bool allow_large = false;
  gen->add_option("family", family, "exfour | heisenberg | group | wreath | orbital")
      ->required();
  gen->add_option("--p", gen_p, "odd prime parameter");
  gen->add_option("--name", group_name, "group name for 'group' (cN, dN, q8, c3xc3, ...)");
  gen->add_option("--left", wreath_left, "fibre group for 'wreath'");
  gen->add_option("--right", wreath_right, "top group for 'wreath'");
  gen->add_option("--degree", orbital_degree, "number of points for 'orbital'");
  gen->add_option("--perm", orbital_perms,
                  "generator for 'orbital' as comma-separated images (repeatable)");
  gen->add_flag("--allow-large", allow_large, "lift the small-prime guard");
  gen->add_option("-o,--out", gen_out, "output file ('-' for stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "check the axioms of a scheme file");
  std::string verify_path;
  verify->add_option("file", verify_path, "scheme file (JSON or text)")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "radical, residue, quotient, spectrum");
  std::string analyze_path;
  std::uint64_t analyze_seed = 12345;
  double analyze_tol = 1e-8;
  bool analyze_json = false;
  analyze->add_option("file", analyze_path)->required();
  analyze->add_option("--seed", analyze_seed, "random seed for the central element");
  analyze->add_option("--tol", analyze_tol, "rank tolerance");
  analyze->add_flag("--json", analyze_json, "print JSON");

  // pls
  auto* pls = app.add_subcommand("pls", "point-line geometry over the quotient");
  std::string pls_path;
  bool pls_json = false;
  pls->add_option("file", pls_path)->required();
  pls->add_flag("--json", pls_json, "print JSON");

  // chars
  auto* chars = app.add_subcommand("chars", "character spectrum and induced degrees");
  std::string chars_path;
  std::uint64_t chars_seed = 12345;
  double chars_tol = 1e-8;
  bool chars_json = false;
  chars->add_option("file", chars_path)->required();
  chars->add_option("--seed", chars_seed, "random seed for the central element");
  chars->add_option("--tol", chars_tol, "rank tolerance");
  chars->add_flag("--json", chars_json, "print JSON");

  // twist
  auto* twist = app.add_subcommand("twist", "relabel one residue coset");
  std::string twist_path, twist_out;
  int twist_coset = -1;
  twist->add_option("file", twist_path)->required();
  twist->add_option("--coset", twist_coset, "coset block to twist (default: block of point 1)");
  twist->add_option("-o,--out", twist_out, "output file ('-' for stdout)");

  // iso
  auto* iso = app.add_subcommand("iso", "exhaustive isomorphism search between two files");
  std::string iso_a, iso_b;
  bool iso_json = false;
  iso->add_option("a", iso_a)->required();
  iso->add_option("b", iso_b)->required();
  iso->add_flag("--json", iso_json, "print JSON");

  // schurian
  auto* schurian = app.add_subcommand("schurian", "orbital test against the automorphism group");
  std::string schurian_path;
  bool schurian_json = false;
  schurian->add_option("file", schurian_path)->required();
  schurian->add_flag("--json", schurian_json, "print JSON");

  // pipeline
  auto* pipeline = app.add_subcommand(
      "pipeline", "base scheme, twist, isomorphism and orbital searches in one run");
  int pipeline_p = 3;
  bool pipeline_slow = false, pipeline_quiet = false;
  std::string pipeline_out;
  pipeline->add_option("--p", pipeline_p, "odd prime parameter");
  pipeline->add_flag("--allow-slow", pipeline_slow, "permit p = 7 (long exhaustive searches)");
  pipeline->add_flag("--quiet", pipeline_quiet, "suppress progress on stderr");
  pipeline->add_option("--out", pipeline_out, "directory for base/twisted/certificate JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed())
      return run_gen(family, gen_p, group_name, wreath_left, wreath_right,
                     orbital_degree, orbital_perms, allow_large, gen_out);
    if (verify->parsed()) return run_verify(verify_path);
    if (analyze->parsed())
      return run_analyze(analyze_path, analyze_seed, analyze_tol, analyze_json);
    if (pls->parsed()) return run_pls(pls_path, pls_json);
    if (chars->parsed()) return run_chars(chars_path, chars_seed, chars_tol, chars_json);
    if (twist->parsed()) return run_twist(twist_path, twist_coset, twist_out);
    if (iso->parsed()) return run_iso(iso_a, iso_b, iso_json);
    if (schurian->parsed()) return run_schurian(schurian_path, schurian_json);
    if (pipeline->parsed())
      return run_pipeline(pipeline_p, pipeline_slow, pipeline_out, pipeline_quiet);
    throw UsageError("no subcommand selected");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const sf::NotOddPrime& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const sf::ResourceGuard& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kGuard;
  } catch (const sf::SchemeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}
