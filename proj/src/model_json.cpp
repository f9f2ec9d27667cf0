#include <fstream>
#include <set>

#include "wh/errors.hpp"
#include "wh/model.hpp"

namespace wh {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(ErrorCode::SchemaError, "unknown key '" + it.key() + "' in " + where);
}

Polynomial parse_coeffs(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::SchemaError, where + " must be a non-empty array of [re, im]");
  std::vector<cplx> c;
  for (const auto& x : j) {
    if (!x.is_array() || x.size() != 2 || !x[0].is_number() || !x[1].is_number())
      fail(ErrorCode::SchemaError, where + " coefficients must be [re, im] pairs");
    c.emplace_back(x[0].get<double>(), x[1].get<double>());
  }
  return Polynomial(std::move(c));
}

json coeffs_to_json(const Polynomial& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back({c.real(), c.imag()});
  return a;
}

}  // namespace

RationalMatrixOmega parse_model_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::SchemaError, "model must be a JSON object");
  reject_unknown(j, {"n", "eta", "entries", "params", "name", "branches"}, "model");
  for (const char* k : {"n", "entries"})
    if (!j.contains(k)) fail(ErrorCode::SchemaError, std::string("missing key '") + k + "'");
  if (!j["n"].is_number_integer() || j["n"].get<int>() < 1) fail(ErrorCode::SchemaError, "'n' must be a positive integer");
  const int n = j["n"].get<int>();
  std::vector<int> eta;
  if (j.contains("eta")) {
    if (!j["eta"].is_array()) fail(ErrorCode::SchemaError, "'eta' must be an array");
    for (const auto& e : j["eta"]) {
      if (!e.is_number_integer()) fail(ErrorCode::SchemaError, "'eta' entries must be integers");
      eta.push_back(e.get<int>());
    }
  }
  const json& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) fail(ErrorCode::SchemaError, "'entries' must have n rows");
  std::vector<RationalFunction> entries;
  for (int r = 0; r < n; ++r) {
    const json& row = rows[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(ErrorCode::SchemaError, "row " + std::to_string(r) + " must have n entries");
    for (int c = 0; c < n; ++c) {
      const json& e = row[static_cast<size_t>(c)];
      const std::string where = "entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
      if (!e.is_object()) fail(ErrorCode::SchemaError, where + " must be an object");
      reject_unknown(e, {"num", "den"}, where);
      if (!e.contains("num") || !e.contains("den")) fail(ErrorCode::SchemaError, where + " needs 'num' and 'den'");
      Polynomial num = parse_coeffs(e["num"], where + ".num");
      Polynomial den = parse_coeffs(e["den"], where + ".den");
      if (den.is_zero()) fail(ErrorCode::SchemaError, where + " has a zero denominator");
      entries.emplace_back(num, den);
    }
  }
  std::map<std::string, double> params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) fail(ErrorCode::SchemaError, "'params' must be an object");
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
      if (!it.value().is_number()) fail(ErrorCode::SchemaError, "param '" + it.key() + "' must be a number");
      params[it.key()] = it.value().get<double>();
    }
  }
  std::vector<Branch> branches;
  if (j.contains("branches")) {
    if (!j["branches"].is_array()) fail(ErrorCode::SchemaError, "'branches' must be an array");
    for (const auto& b : j["branches"]) {
      if (!b.is_string()) fail(ErrorCode::SchemaError, "'branches' entries must be strings");
      branches.push_back(parse_branch(b.get<std::string>()));
    }
  }
  std::string name = j.value("name", std::string("json"));
  return finalize_model(std::move(name), n, std::move(eta), std::move(entries), std::move(params), std::move(branches));
}

RationalMatrixOmega load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::SchemaError, "cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
  }
  return parse_model_json(j);
}

json model_to_json(const RationalMatrixOmega& m) {
  json j;
  j["name"] = m.name;
  j["n"] = m.n;
  j["eta"] = m.eta;
  json rows = json::array();
  for (int r = 0; r < m.n; ++r) {
    json row = json::array();
    for (int c = 0; c < m.n; ++c)
      row.push_back({{"num", coeffs_to_json(m.at(r, c).num())}, {"den", coeffs_to_json(m.at(r, c).den())}});
    rows.push_back(row);
  }
  j["entries"] = rows;
  j["params"] = m.params;
  json b = json::array();
  for (auto x : m.default_branches) b.push_back(branch_name(x));
  j["branches"] = b;
  return j;
}

}  // namespace wh
