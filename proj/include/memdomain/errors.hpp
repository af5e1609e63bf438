#pragma once

#include <stdexcept>
#include <string>

namespace memdomain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Common frequency would be imaginary (over-damped regime).
class RealityViolation : public Error {
 public:
  using Error::Error;
};

/// 2 omega0 <= L: the mode never satisfies the reality condition.
class NeverRecordable : public Error {
 public:
  using Error::Error;
};

/// Evaluation time at or past the recording window of the mode.
class ModeDead : public Error {
 public:
  using Error::Error;
};

/// The n -> -(n+1) branch with growing frequency.
class UnsupportedBranch : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

/// Fock-space truncation too small for the requested accuracy.
class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

}  // namespace memdomain
