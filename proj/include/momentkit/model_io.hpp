#pragma once

#include "momentkit/models.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <string>

namespace momentkit {

namespace detail {

inline double json_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw parse_error(std::string("model file: ") + what + " must be a number");
  return j.get<double>();
}

inline int json_int(const nlohmann::json& j, const char* what) {
  if (!j.is_number_integer()) throw parse_error(std::string("model file: ") + what + " must be an integer");
  return j.get<int>();
}

}  // namespace detail

// Parses the representation file format without running the residual checks:
// name, algebra_dim, hilbert_dim, structure_constants as 1-based [i,j,k,value]
// rows with i < j, generators as hdim x hdim arrays of [re,im] pairs, plus
// optional cocycle and safe_domain_levels. Unknown fields are rejected.
inline Representation load_model_unchecked(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open model file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("model file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw parse_error("model file: top level must be an object");

  static const std::set<std::string> known{"name",       "algebra_dim", "hilbert_dim",
                                           "structure_constants", "generators",
                                           "cocycle",    "safe_domain_levels"};
  for (const auto& item : doc.items())
    if (!known.count(item.key())) throw parse_error("model file: unknown field '" + item.key() + "'");
  for (const char* req : {"name", "algebra_dim", "hilbert_dim", "structure_constants", "generators"})
    if (!doc.contains(req)) throw parse_error(std::string("model file: missing field '") + req + "'");

  if (!doc["name"].is_string()) throw parse_error("model file: name must be a string");
  const std::string name = doc["name"].get<std::string>();
  const int d = detail::json_int(doc["algebra_dim"], "algebra_dim");
  const int n = detail::json_int(doc["hilbert_dim"], "hilbert_dim");
  if (d < 1 || n < 1) throw parse_error("model file: dimensions must be positive");

  if (!doc["structure_constants"].is_array())
    throw parse_error("model file: structure_constants must be an array");
  std::vector<StructureTerm> terms;
  for (const auto& row : doc["structure_constants"]) {
    if (!row.is_array() || row.size() != 4)
      throw parse_error("model file: structure_constants rows must be [i,j,k,value]");
    StructureTerm t;
    t.i = detail::json_int(row[0], "structure index") - 1;
    t.j = detail::json_int(row[1], "structure index") - 1;
    t.k = detail::json_int(row[2], "structure index") - 1;
    t.value = detail::json_number(row[3], "structure value");
    if (t.i >= t.j) throw parse_error("model file: structure_constants requires i < j (1-based)");
    terms.push_back(t);
  }

  if (!doc["generators"].is_array() || doc["generators"].size() != static_cast<std::size_t>(d))
    throw parse_error("model file: expected algebra_dim generator matrices");
  std::vector<CMat> gens;
  for (const auto& gj : doc["generators"]) {
    if (!gj.is_array() || gj.size() != static_cast<std::size_t>(n))
      throw parse_error("model file: generator must have hilbert_dim rows");
    CMat a(n, n);
    for (int r = 0; r < n; ++r) {
      const auto& rowj = gj[r];
      if (!rowj.is_array() || rowj.size() != static_cast<std::size_t>(n))
        throw parse_error("model file: generator row length mismatch");
      for (int c = 0; c < n; ++c) {
        const auto& e = rowj[c];
        if (!e.is_array() || e.size() != 2)
          throw parse_error("model file: generator entries must be [re, im] pairs");
        a(r, c) = Complex(detail::json_number(e[0], "generator entry"),
                          detail::json_number(e[1], "generator entry"));
      }
    }
    gens.push_back(std::move(a));
  }

  RMat w;
  if (doc.contains("cocycle")) {
    const auto& cj = doc["cocycle"];
    if (!cj.is_array() || cj.size() != static_cast<std::size_t>(d))
      throw parse_error("model file: cocycle must be a d x d array");
    w.resize(d, d);
    for (int r = 0; r < d; ++r) {
      if (!cj[r].is_array() || cj[r].size() != static_cast<std::size_t>(d))
        throw parse_error("model file: cocycle row length mismatch");
      for (int c = 0; c < d; ++c) w(r, c) = detail::json_number(cj[r][c], "cocycle entry");
    }
  }

  int safe_levels = 0;
  if (doc.contains("safe_domain_levels"))
    safe_levels = detail::json_int(doc["safe_domain_levels"], "safe_domain_levels");

  try {
    LieAlgebra algebra = LieAlgebra::make(d, {}, std::move(terms));
    return make_representation(name, std::move(algebra), std::move(gens), std::move(w), safe_levels);
  } catch (const std::invalid_argument& e) {
    throw parse_error("model file: " + std::string(e.what()));
  }
}

// Parse and validate; rejects any residual above tolerance, naming the
// failing check and generator pair.
inline Representation load_model(const std::string& path, const Tolerance& tol = {}) {
  Representation rep = load_model_unchecked(path);
  const ValidationReport report = validate(rep, tol);
  if (!report.pass)
    throw validation_error("model '" + rep.name + "' failed validation: " + report.first_failure());
  return rep;
}

inline void save_model(const Representation& rep, const std::string& path) {
  nlohmann::json doc;
  doc["name"] = rep.name;
  doc["algebra_dim"] = rep.algebra.dim;
  doc["hilbert_dim"] = rep.hilbert_dim;
  nlohmann::json terms = nlohmann::json::array();
  for (const StructureTerm& t : rep.algebra.terms)
    terms.push_back({t.i + 1, t.j + 1, t.k + 1, t.value});
  doc["structure_constants"] = std::move(terms);
  nlohmann::json gens = nlohmann::json::array();
  for (const CMat& a : rep.generators) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < rep.hilbert_dim; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < rep.hilbert_dim; ++c)
        row.push_back({a(r, c).real(), a(r, c).imag()});
      rows.push_back(std::move(row));
    }
    gens.push_back(std::move(rows));
  }
  doc["generators"] = std::move(gens);
  if (rep.cocycle.lpNorm<Eigen::Infinity>() != 0.0) {
    nlohmann::json w = nlohmann::json::array();
    for (int r = 0; r < rep.algebra.dim; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < rep.algebra.dim; ++c) row.push_back(rep.cocycle(r, c));
      w.push_back(std::move(row));
    }
    doc["cocycle"] = std::move(w);
  }
  if (rep.has_safe_domain()) doc["safe_domain_levels"] = rep.safe_levels;

  std::ofstream out(path);
  if (!out) throw parse_error("cannot write model file: " + path);
  out << doc.dump(1) << "\n";
}

// Model addresses: "su2:<two_j>", "torus:<n>" (unit weights),
// "torus:(w1,...,wn)", "weyl:<n_levels>", or "file:<path>".
inline Representation parse_model_spec(const std::string& spec, const Tolerance& tol = {},
                                       bool validate_files = true) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw parse_error("unknown model '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (arg.empty()) throw parse_error("model '" + spec + "': missing parameter");

  auto parse_int = [&spec](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw parse_error("model '" + spec + "': bad integer '" + s + "'");
    }
    if (used != s.size()) throw parse_error("model '" + spec + "': bad integer '" + s + "'");
    if (v < -4096 || v > 4096)
      throw parse_error("model '" + spec + "': parameter out of range");
    return v;
  };

  try {
    if (kind == "su2") return su2_spin(static_cast<int>(parse_int(arg)));
    if (kind == "weyl") return weyl_truncated(static_cast<int>(parse_int(arg)));
    if (kind == "torus") {
      if (arg.front() == '(') {
        if (arg.back() != ')') throw parse_error("model '" + spec + "': unbalanced weight list");
        std::vector<long long> weights;
        std::string body = arg.substr(1, arg.size() - 2);
        std::size_t pos = 0;
        while (pos <= body.size()) {
          const std::size_t next = body.find(',', pos);
          const std::string tok = body.substr(pos, next == std::string::npos ? next : next - pos);
          weights.push_back(parse_int(tok));
          if (next == std::string::npos) break;
          pos = next + 1;
        }
        return torus_diag(weights);
      }
      const long long count = parse_int(arg);
      if (count < 1) throw parse_error("model '" + spec + "': torus size must be positive");
      return torus_diag(std::vector<long long>(static_cast<std::size_t>(count), 1));
    }
    if (kind == "file")
      return validate_files ? load_model(arg, tol) : load_model_unchecked(arg);
  } catch (const std::invalid_argument& e) {
    throw parse_error("model '" + spec + "': " + e.what());
  }
  throw parse_error("unknown model '" + spec + "'");
}

}  // namespace momentkit
