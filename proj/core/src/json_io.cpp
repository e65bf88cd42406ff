#include "lpuhf/json_io.hpp"

#include "lpuhf/error.hpp"

#include <cmath>
#include <string>

namespace lpuhf::io {

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

std::size_t size_from_json(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw InputError(what + " must be a positive integer");
  return j.get<std::size_t>();
}

Exponent exponent_from_json(const json& j) {
  if (j.is_string()) return Exponent::parse(j.get<std::string>());
  if (j.is_number()) return Exponent(j.get<double>());
  throw InputError("p must be a number or a string");
}

}  // namespace

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    const auto slash = text.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
      } else {
        const double num = std::stod(text.substr(0, slash), &used);
        if (used == slash) {
          const std::string den_text = text.substr(slash + 1);
          const double den = std::stod(den_text, &used);
          if (used == den_text.size() && den != 0.0) return num / den;
        }
      }
    } catch (const std::exception&) {
    }
    throw InputError("cannot parse number \"" + text + "\"");
  }
  throw InputError("expected a number, got " + std::string(j.type_name()));
}

Complex complex_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw InputError("complex numbers are [re, im] pairs");
    return {number_from_json(j[0]), number_from_json(j[1])};
  }
  return {number_from_json(j), 0.0};
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw InputError("matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  check_capacity(std::max(rows, cols), "matrix");
  CMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = complex_from_json(j[r][c]);
  }
  return out;
}

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v[k].real(), v[k].imag()});
  return out;
}

SimilaritySystem system_from_json(const json& j, bool validate) {
  if (!j.is_object()) throw InputError("system must be a JSON object");
  if (j.contains("family")) {
    const auto fam = j.at("family");
    if (!fam.is_string() || fam.get<std::string>() != "gamma_corner")
      throw InputError("unknown system family " + fam.dump());
    const std::size_t d = size_from_json(require(j, "d", "gamma_corner system"), "d");
    const double gamma = number_from_json(require(j, "gamma", "gamma_corner system"));
    return gamma_corner_system(d, gamma);
  }
  const std::size_t d = size_from_json(require(j, "d", "system"), "d");
  check_capacity(d, "system");
  const bool diagonal = j.contains("diagonal") ? j.at("diagonal").get<bool>() : false;
  const auto& index = require(j, "index", "system");
  if (!index.is_array()) throw InputError("system: \"index\" must be an array");
  std::vector<SystemEntry> entries;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto& e = index[i];
    const std::string where = "system index " + std::to_string(i);
    SystemEntry entry;
    entry.label = e.contains("label") ? e.at("label").get<std::string>() : std::to_string(i);
    entry.f = number_from_json(require(e, "f", where));
    entry.s = matrix_from_json(require(e, "s", where));
    entries.push_back(std::move(entry));
  }
  SimilaritySystem out(d, std::move(entries), diagonal);
  if (validate) require_valid(out);
  return out;
}

json system_to_json(const SimilaritySystem& s) {
  json index = json::array();
  for (const auto& e : s.entries()) index.push_back({{"label", e.label}, {"f", e.f}, {"s", matrix_to_json(e.s)}});
  return {{"d", s.d()}, {"diagonal", s.diagonal()}, {"index", index}};
}

StageSpec stage_spec_from_json(const json& j) {
  if (!j.is_object()) throw InputError("stage spec must be a JSON object");
  const Exponent p = exponent_from_json(require(j, "p", "stage spec"));
  const auto& stages = require(j, "stages", "stage spec");
  if (!stages.is_array()) throw InputError("stage spec: \"stages\" must be an array");
  std::vector<Stage> out;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const auto& st = stages[k];
    const std::string where = "stage " + std::to_string(k + 1);
    const std::size_t d = size_from_json(require(st, "d", where), where + " d");
    json sys = require(st, "system", where);
    if (sys.is_object() && sys.contains("family") && !sys.contains("d")) sys["d"] = d;
    out.push_back({d, system_from_json(sys)});
  }
  return StageSpec(std::move(out), p);
}

GammaFamily family_from_json(const json& j) {
  const auto& fam = require(j, "family", "family");
  if (!fam.is_string()) throw InputError("family name must be a string");
  const auto name = fam.get<std::string>();
  GammaFamily f;
  if (name == "power")
    f.kind = GammaFamily::Kind::power;
  else if (name == "geometric")
    f.kind = GammaFamily::Kind::geometric;
  else if (name == "log")
    f.kind = GammaFamily::Kind::log;
  else
    throw InputError("unknown family \"" + name + "\"");
  f.c = number_from_json(require(j, "c", name + " family"));
  if (f.kind == GammaFamily::Kind::geometric)
    f.q = number_from_json(require(j, "q", name + " family"));
  else
    f.a = number_from_json(require(j, "a", name + " family"));
  if (j.contains("d")) f.d = size_from_json(j.at("d"), "family d");
  return f;
}

StageRecipe recipe_from_json(const json& j) {
  if (j.is_object() && j.contains("family")) return StageRecipe(family_from_json(j));
  return StageRecipe(stage_spec_from_json(j));
}

json to_json(const NormInterval& n) {
  json methods = json::array();
  for (auto m : n.methods) methods.push_back(to_string(m));
  return {{"lower", n.lower}, {"upper", n.upper}, {"methods", methods}, {"witness", vector_to_json(n.lower_witness)}};
}

json to_json(const SeriesReport& r) {
  return {{"terms", r.terms},
          {"partial_sums", r.partial_sums},
          {"partial_products", r.partial_products},
          {"verdict", to_string(r.verdict)},
          {"verdict_basis", r.verdict_basis}};
}

}  // namespace lpuhf::io
