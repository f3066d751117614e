#pragma once

#include <stdexcept>
#include <string>

namespace wtype {

enum class ErrorCode {
  schema,             // malformed or unknown document content
  not_homeomorphism,  // generator data does not define a homeomorphism
  model_mismatch,     // operands live on different spaces/systems
  depth,              // depth out of range or over the atom budget
  index,              // witness refers to an index outside the tuples
  precondition,       // operation called outside its domain
  internal,           // a construction failed its own verification
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::schema: return "E_SCHEMA";
    case ErrorCode::not_homeomorphism: return "E_NOT_HOMEOMORPHISM";
    case ErrorCode::model_mismatch: return "E_MODEL_MISMATCH";
    case ErrorCode::depth: return "E_DEPTH";
    case ErrorCode::index: return "E_INDEX";
    case ErrorCode::precondition: return "E_PRECONDITION";
    case ErrorCode::internal: return "E_INTERNAL";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wtype
