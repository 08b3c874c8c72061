#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aisle {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (shape mismatch, bad index,
/// malformed presentation, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Two values live over different ground fields or different algebras.
class Mismatch : public Error {
 public:
  using Error::Error;
};

/// The requested computation is not available over the session field.
class UnsupportedField : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed. Seeing this is a bug.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// An iteration did not stabilise within its budget, or a resolution did
/// not terminate. Distinct from refutation: nothing was decided.
class NonTermination : public Error {
 public:
  NonTermination(std::size_t iterations, const std::string& what) : Error(what), iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// A certificate failed to replay; `step()` is the offending step index.
class CertificateError : public Error {
 public:
  CertificateError(std::size_t step, const std::string& what)
      : Error("certificate step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace aisle
