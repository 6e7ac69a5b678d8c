#pragma once

#include <stdexcept>
#include <string>

namespace fourierml {

// Characteristic function blew up (non-finite exponent or value). Callers that
// probe moment existence treat this as "argument inadmissible".
struct CfOverflowError : std::runtime_error {
  CfOverflowError() : std::runtime_error("cf-overflow") {}
};

struct MomentUnavailableError : std::runtime_error {
  MomentUnavailableError() : std::runtime_error("moment-unavailable") {}
};

struct NoAdmissibleAlphaError : std::runtime_error {
  NoAdmissibleAlphaError() : std::runtime_error("no-admissible-alpha") {}
};

struct IntegralNonconvergentError : std::runtime_error {
  IntegralNonconvergentError() : std::runtime_error("integral-nonconvergent") {}
};

struct ModelFormatError : std::runtime_error {
  explicit ModelFormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fourierml
