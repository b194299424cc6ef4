#include "ngm/errors.hpp"

namespace ngm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::LinearAlgebra: return "linear_algebra";
    case ErrorKind::Grid: return "grid";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Config: return "config";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace ngm
