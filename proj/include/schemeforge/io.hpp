#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schemeforge/errors.hpp"
#include "schemeforge/scheme.hpp"

namespace schemeforge {

using Json = nlohmann::ordered_json;

struct SchemeData {
  Scheme scheme;
  std::map<std::string, std::vector<Rel>> labels;  // named relation subsets
  Json provenance = Json::object();
};

inline Json scheme_to_json(const Scheme& s,
                           const std::map<std::string, std::vector<Rel>>& labels = {},
                           const Json& provenance = Json::object()) {
  Json j;
  j["format"] = "schemeforge.scheme";
  j["version"] = 1;
  j["points"] = s.n_points();
  j["relations"] = s.n_relations();
  Json rows = Json::array();
  for (int x = 0; x < s.n_points(); ++x) {
    Json row = Json::array();
    for (int y = 0; y < s.n_points(); ++y) row.push_back(s.at(x, y));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  Json lbl = Json::object();
  for (const auto& [name, rels] : labels) lbl[name] = rels;
  j["labels"] = std::move(lbl);
  j["provenance"] = provenance;
  return j;
}

// Plain text: "n r" on the first line, then n rows of n relation indices.
inline std::string scheme_to_text(const Scheme& s) {
  std::ostringstream out;
  out << s.n_points() << ' ' << s.n_relations() << '\n';
  for (int x = 0; x < s.n_points(); ++x) {
    for (int y = 0; y < s.n_points(); ++y) {
      if (y) out << ' ';
      out << s.at(x, y);
    }
    out << '\n';
  }
  return out.str();
}

namespace detail {

inline SchemeData scheme_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("matrix"))
    throw DataError("scheme file lacks a matrix field");
  const auto& rows = j.at("matrix");
  if (!rows.is_array() || rows.empty()) throw DataError("matrix must be a non-empty array");
  const int n = static_cast<int>(rows.size());
  std::vector<int32_t> flat;
  flat.reserve(static_cast<size_t>(n) * n);
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw DataError("matrix is not square");
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw DataError("matrix entry is not an integer");
      flat.push_back(v.get<int32_t>());
    }
  }
  if (j.contains("points") && j.at("points").get<int>() != n)
    throw DataError("points field disagrees with the matrix size");

  auto built = build_scheme(n, flat);
  SchemeData data;
  if (j.contains("relations") &&
      j.at("relations").get<int>() != built.scheme.n_relations())
    throw DataError("relations field disagrees with the matrix contents");
  if (j.contains("labels")) {
    for (const auto& [name, rels] : j.at("labels").items()) {
      std::vector<Rel> mapped;
      for (const auto& v : rels) {
        const int raw = v.get<int>();
        if (raw < 0 || raw >= built.scheme.n_relations())
          throw DataError("label '" + name + "' references a relation out of range");
        mapped.push_back(built.relabel[raw]);
      }
      std::sort(mapped.begin(), mapped.end());
      data.labels[name] = std::move(mapped);
    }
  }
  if (j.contains("provenance")) data.provenance = j.at("provenance");
  data.scheme = std::move(built.scheme);
  return data;
}

inline SchemeData scheme_from_text(const std::string& text) {
  std::istringstream in(text);
  int n = 0, r = 0;
  if (!(in >> n >> r) || n <= 0) throw DataError("text scheme header must be 'n r'");
  std::vector<int32_t> flat(static_cast<size_t>(n) * n);
  for (auto& v : flat)
    if (!(in >> v)) throw DataError("text scheme matrix is truncated");
  auto built = build_scheme(n, flat);
  if (built.scheme.n_relations() != r)
    throw DataError("text scheme header announces " + std::to_string(r) +
                    " relations but the matrix has " +
                    std::to_string(built.scheme.n_relations()));
  SchemeData data;
  data.scheme = std::move(built.scheme);
  return data;
}

}  // namespace detail

// Accepts either the JSON format or the plain text matrix format; the
// relations are renumbered canonically on the way in and any labels are
// carried along.
inline SchemeData parse_scheme(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw DataError("scheme file is empty");
  if (text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("scheme file is not valid JSON: ") + e.what());
    }
    try {
      return detail::scheme_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("scheme file has malformed fields: ") + e.what());
    }
  }
  return detail::scheme_from_text(text);
}

inline SchemeData read_scheme(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scheme(buf.str());
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << contents;
}

inline void write_scheme_json(const std::string& path, const Scheme& s,
                              const std::map<std::string, std::vector<Rel>>& labels = {},
                              const Json& provenance = Json::object()) {
  write_file(path, scheme_to_json(s, labels, provenance).dump(1) + "\n");
}

}  // namespace schemeforge
