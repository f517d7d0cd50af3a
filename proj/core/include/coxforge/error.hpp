#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace coxforge {

// Malformed input, violated precondition, unsupported value.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checker found a property violation; carries the witness.
class VerificationError : public Error {
 public:
  VerificationError(const std::string& msg, nlohmann::json witness)
      : Error(msg), witness_(std::move(witness)) {}
  const nlohmann::json& witness() const { return witness_; }

 private:
  nlohmann::json witness_;
};

}  // namespace coxforge
