#pragma once

#include <stdexcept>
#include <string>

namespace afb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rate constants that are not strictly positive and finite.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// A state outside the nonnegative orthant, or with non-finite components.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of a formula (e.g. a nonpositive level).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A certificate request whose level lies below the exact threshold.
class CertificateError : public Error {
 public:
  using Error::Error;
};

/// The trajectory and certificate were computed for different inputs.
class ProvenanceError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, JSON or CSV input.
class InputError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_time)
      : Error(what), last_time_(last_time) {}

  /// Time of the last accepted step before the failure.
  double last_time() const noexcept { return last_time_; }

 private:
  double last_time_;
};

}  // namespace afb
