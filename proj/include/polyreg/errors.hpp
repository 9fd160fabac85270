#pragma once

#include <stdexcept>
#include <string>

namespace polyreg {

/// Caller violated a precondition (dimension mismatch, malformed input, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptySetError : public std::runtime_error {
 public:
  EmptySetError() : std::runtime_error("polyhedral set is empty") {}
};

class NotInSetError : public std::runtime_error {
 public:
  explicit NotInSetError(const std::string& what = "point does not belong to the set")
      : std::runtime_error(what) {}
};

class MalformedRelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularRelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampled right-hand side had zero or several solutions where exactly one was required.
class NonUniqueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polyreg
