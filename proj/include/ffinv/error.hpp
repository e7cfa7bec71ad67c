#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ffinv {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller error: bad arguments, mismatched dimensions or fields.
class UsageError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public UsageError {
 public:
  using UsageError::UsageError;
};

class FieldMismatch : public UsageError {
 public:
  FieldMismatch() : UsageError("operands belong to different prime fields") {}
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("inverse of zero in a prime field") {}
};

/// A matrix that had to be inverted turned out to be singular.
class SingularMatrix : public Error {
 public:
  SingularMatrix(std::string stage, std::size_t rank_hint)
      : Error(stage + ": matrix is singular (rank " + std::to_string(rank_hint) + ")"),
        stage_(std::move(stage)),
        rank_hint_(rank_hint) {}

  const std::string& stage() const noexcept { return stage_; }
  std::size_t rank_hint() const noexcept { return rank_hint_; }

 private:
  std::string stage_;
  std::size_t rank_hint_;
};

/// Schur recursion met a singular leading block; re-randomizing the input usually helps.
class NotStronglyRegular : public Error {
 public:
  explicit NotStronglyRegular(int level)
      : Error("leading block minor is singular at recursion level " + std::to_string(level)),
        level_(level) {}

  int level() const noexcept { return level_; }

 private:
  int level_;
};

/// Displacement operator is not invertible (e.g. Cauchy parameters collide).
class OperatorSingular : public Error {
 public:
  using Error::Error;
};

/// Randomized preconditioning failed on every allowed draw.
class PreconditionFailure : public Error {
 public:
  using Error::Error;
};

class RetriesExhausted : public Error {
 public:
  using Error::Error;
};

/// The prime is too small for the probabilistic guarantees of a routine.
class FieldTooSmall : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class NotAUnit : public Error {
 public:
  NotAUnit() : Error("element is not a unit of the group ring") {}
};

class InvalidPresentation : public UsageError {
 public:
  using UsageError::UsageError;
};

class NonClosedComplex : public UsageError {
 public:
  using UsageError::UsageError;
};

}  // namespace ffinv
