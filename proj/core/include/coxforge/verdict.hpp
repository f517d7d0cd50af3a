#pragma once

#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace coxforge {

// Outcome of a single property check. `witness` is empty on pass and holds
// the offending configuration on fail.
struct CheckResult {
  std::string property;
  bool pass = true;
  nlohmann::json witness = nlohmann::json::object();

  static CheckResult ok(std::string prop) {
    CheckResult r;
    r.property = std::move(prop);
    return r;
  }
  static CheckResult fail(std::string prop, nlohmann::json w) {
    CheckResult r;
    r.property = std::move(prop);
    r.pass = false;
    r.witness = std::move(w);
    return r;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["property"] = property;
    j["status"] = pass ? "pass" : "fail";
    j["witness"] = witness;
    return j;
  }
};

}  // namespace coxforge
