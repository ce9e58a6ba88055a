#include "plq/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace plq {

using nlohmann::json;

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw InputError(where + ": unknown key \"" + key + "\"");
  }
  for (const auto& key : allowed) {
    if (!obj.contains(key)) throw InputError(where + ": missing key \"" + key + "\"");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

Vector vector_of(const json& j, int n, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  if (static_cast<int>(j.size()) != n) {
    throw InputError(where + ": expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = number(j[static_cast<std::size_t>(i)], where);
  return v;
}

Matrix matrix_of(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw InputError(where + ": expected " + std::to_string(n) + " rows");
  }
  Matrix M(n, n);
  for (int i = 0; i < n; ++i) {
    M.row(i) = vector_of(j[static_cast<std::size_t>(i)], n, where + " row " + std::to_string(i + 1)).transpose();
  }
  return M;
}

}  // namespace

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

PLQFunction parse_plq(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("JSON parse error at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  check_keys(doc, {"dim", "pieces"}, "document");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<int>() < 1) {
    throw InputError("document: \"dim\" must be a positive integer");
  }
  const int n = doc["dim"].get<int>();
  if (!doc["pieces"].is_array() || doc["pieces"].empty()) {
    throw InputError("document: \"pieces\" must be a nonempty array");
  }
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < doc["pieces"].size(); ++i) {
    const std::string where = "piece " + std::to_string(i + 1);
    const json& p = doc["pieces"][i];
    check_keys(p, {"A", "b", "c", "region"}, where);
    if (!p["region"].is_array()) throw InputError(where + ": \"region\" must be an array");
    std::vector<HalfSpace> hs;
    for (std::size_t k = 0; k < p["region"].size(); ++k) {
      const std::string hw = where + " halfspace " + std::to_string(k + 1);
      const json& h = p["region"][k];
      check_keys(h, {"a", "beta"}, hw);
      try {
        hs.emplace_back(vector_of(h["a"], n, hw + " \"a\""), number(h["beta"], hw + " \"beta\""));
      } catch (const std::invalid_argument& e) {
        throw InputError(hw + ": " + e.what());
      }
    }
    try {
      QuadraticFunction fn(matrix_of(p["A"], n, where + " \"A\""), vector_of(p["b"], n, where + " \"b\""),
                           number(p["c"], where + " \"c\""));
      pieces.push_back({std::move(fn), PolyhedralSet(n, std::move(hs))});
    } catch (const InputError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return PLQFunction(n, std::move(pieces));
}

PLQFunction load_plq(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_plq(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

json plq_to_json(const PLQFunction& f) {
  json pieces = json::array();
  for (const auto& p : f.pieces()) {
    json A = json::array();
    for (Eigen::Index i = 0; i < p.fn.A().rows(); ++i) A.push_back(vector_to_json(p.fn.A().row(i).transpose()));
    json region = json::array();
    for (const auto& h : p.region.halfspaces()) region.push_back({{"a", vector_to_json(h.a)}, {"beta", h.beta}});
    pieces.push_back({{"A", A}, {"b", vector_to_json(p.fn.b())}, {"c", p.fn.c()}, {"region", region}});
  }
  return {{"dim", f.dim()}, {"pieces", pieces}};
}

json report_to_json(const ThresholdReport& report) {
  json pieces = json::array();
  for (const auto& s : report.pieces) {
    json phi = nullptr;
    if (s.phi) {
      phi = json::array();
      for (const auto& u : *s.phi) phi.push_back(vector_to_json(u));
    }
    pieces.push_back({{"index", s.index},
                      {"r_bar", s.r_bar},
                      {"G", s.G ? json(*s.G) : json(nullptr)},
                      {"domain", s.domain},
                      {"phi", phi}});
  }
  return {{"r_bar", report.r_bar},
          {"active_set", report.active_set},
          {"pieces", pieces},
          {"overall_domain", report.overall_domain},
          {"warnings", report.warnings}};
}

ThresholdReport report_from_json(const json& j) {
  ThresholdReport r;
  try {
    r.r_bar = j.at("r_bar").get<double>();
    r.active_set = j.at("active_set").get<std::vector<int>>();
    r.overall_domain = j.at("overall_domain").get<std::string>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& p : j.at("pieces")) {
      PieceSummary s;
      s.index = p.at("index").get<int>();
      s.r_bar = p.at("r_bar").get<double>();
      if (!p.at("G").is_null()) s.G = p.at("G").get<double>();
      s.domain = p.at("domain").get<std::string>();
      if (!p.at("phi").is_null()) {
        std::vector<Vector> phi;
        for (const auto& u : p.at("phi")) {
          const auto vals = u.get<std::vector<double>>();
          phi.push_back(Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size())));
        }
        s.phi = std::move(phi);
      }
      r.pieces.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return r;
}

json verdict_to_json(const OracleVerdict& v) {
  json out = {{"kind", to_string(v.kind)}, {"radius_used", v.radius_used}};
  if (v.kind == VerdictKind::Finite) {
    out["value"] = v.value;
    out["argmin"] = vector_to_json(v.argmin);
  } else if (v.kind == VerdictKind::DivergentNegInf) {
    out["ray"] = vector_to_json(v.ray);
  }
  return out;
}

}  // namespace plq
