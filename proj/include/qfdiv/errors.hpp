#pragma once

#include <stdexcept>
#include <string>

namespace qfdiv {

/// A mathematical precondition does not hold (non-Hermitian input, non-density
/// matrix, singular P, dimension mismatch, ...).
class PreconditionError : public std::domain_error {
 public:
  explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

/// An iterative routine did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed external input (files, generator spec strings, flags).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qfdiv
