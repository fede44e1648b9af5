#pragma once

#include <stdexcept>
#include <string>

namespace steergap {

// Input that is well-formed but violates a mathematical precondition
// (non-unit Bloch vector, invalid state, degenerate direction...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or unreadable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally broken input files (bad JSON, wrong row width, unknown keys).
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TraceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PsdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A run configuration that cannot be executed (e.g. an LHS ensemble failing
// the barycenter requirement for the requested state).
class InfeasibleConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace steergap
