#pragma once

#include <stdexcept>
#include <string>

namespace kondratiev {

enum class ErrorCode {
  InvalidParams,
  MixedIntegrability,
  PointOutsideDomain,
  ZeroWeight,
  DegeneratePolygon,
  OrderExceeded,
  SingularPoint,
  UnboundedSupport,
  SuiteUnknown,
  QuadratureFailure,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }
  // numerical failures map to a different CLI exit status than bad input
  bool numerical() const { return code_ == ErrorCode::QuadratureFailure; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

}  // namespace kondratiev
