#pragma once

#include <stdexcept>
#include <string>

namespace vnlab {

/// Base class of every error the library raises. The CLI maps the concrete
/// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (wrong shapes, bad JSON, out-of-range values).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap would be exceeded.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, unsigned long long requested, unsigned long long cap)
      : Error(what + ": requested " + std::to_string(requested) + " exceeds cap " +
              std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  unsigned long long requested() const noexcept { return requested_; }
  unsigned long long cap() const noexcept { return cap_; }

 private:
  unsigned long long requested_;
  unsigned long long cap_;
};

/// An element that should lie in an algebra does not.
class MembershipError : public InputError {
 public:
  using InputError::InputError;
};

/// The trace vanishes on a minimal central projection.
class FaithfulnessFailure : public InputError {
 public:
  using InputError::InputError;
};

class HomomorphismFailure : public InputError {
 public:
  using InputError::InputError;
};

class NotMeasurePreserving : public InputError {
 public:
  using InputError::InputError;
};

/// Two independently computed answers disagree.
class ConsistencyFailure : public Error {
 public:
  using Error::Error;
};

/// Numerical routine could not reach a decision (e.g. repeated eigenvalue collisions).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Name of the most derived library error class, "error" otherwise.
inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const MembershipError*>(&e)) return "MembershipError";
  if (dynamic_cast<const FaithfulnessFailure*>(&e)) return "FaithfulnessFailure";
  if (dynamic_cast<const HomomorphismFailure*>(&e)) return "HomomorphismFailure";
  if (dynamic_cast<const NotMeasurePreserving*>(&e)) return "NotMeasurePreserving";
  if (dynamic_cast<const InputError*>(&e)) return "InputError";
  if (dynamic_cast<const CapExceeded*>(&e)) return "CapExceeded";
  if (dynamic_cast<const ConsistencyFailure*>(&e)) return "ConsistencyFailure";
  if (dynamic_cast<const NumericalFailure*>(&e)) return "NumericalFailure";
  return "error";
}

}  // namespace vnlab
