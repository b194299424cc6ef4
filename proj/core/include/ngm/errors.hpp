#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ngm {

// Failure categories surfaced by the library. The CLI maps these onto its
// exit-code contract, so new kinds must be added to cli::exit_code_for too.
enum class ErrorKind {
  Domain,         // argument outside the mathematical domain
  Capacity,       // cutoff / memory cap exceeded
  Shape,          // mismatched field or matrix dimensions
  Truncation,     // Fock or grid truncation lost too much weight
  Consistency,    // internal cross-check failed (e.g. imaginary residue)
  Normalization,  // field or state not normalized
  LinearAlgebra,  // singular or non-positive-definite matrix
  Grid,           // grid too small or support overflow
  Precondition,   // operation called outside its stated validity range
  Config,         // invalid run configuration or input document
  Parse,          // malformed input file
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace ngm
