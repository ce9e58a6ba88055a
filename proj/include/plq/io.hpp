#pragma once

#include "plq/aggregate.hpp"
#include "plq/oracle.hpp"
#include "plq/plq_core.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace plq {

/// Malformed or inconsistent input; the message carries line/column when known.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// PLQ document:
//   {"dim": n,
//    "pieces": [{"A": [[...]], "b": [...], "c": c,
//                "region": [{"a": [...], "beta": β}, ...]}, ...]}
// An empty region list means ℝⁿ. Unknown keys are rejected.
PLQFunction parse_plq(const std::string& text);
PLQFunction load_plq(const std::string& path);
nlohmann::json plq_to_json(const PLQFunction& f);

nlohmann::json report_to_json(const ThresholdReport& report);
ThresholdReport report_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const OracleVerdict& v);
nlohmann::json vector_to_json(const Vector& v);

}  // namespace plq
