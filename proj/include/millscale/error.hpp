#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace millscale {

/// Base class of every error raised by the library. Domain errors map to
/// exit code 1 in the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class LimitTooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidExponent : public Error {
 public:
  using Error::Error;
};

class InvalidRange : public Error {
 public:
  using Error::Error;
};

class SeedNotPrime : public Error {
 public:
  using Error::Error;
};

enum class BoundSide { Lower, Upper };

inline const char* to_string(BoundSide side) {
  return side == BoundSide::Lower ? "lower" : "upper";
}

/// A constructed term fell outside the sandwich (prev-1)^c+1 < P < prev^c
/// (or its floor-variant analogue).
class BoundViolation : public Error {
 public:
  BoundViolation(std::size_t index, BoundSide side)
      : Error("bound violation at index " + std::to_string(index) + " (" +
              to_string(side) + " bound)"),
        index_(index),
        side_(side) {}

  std::size_t index() const noexcept { return index_; }
  BoundSide side() const noexcept { return side_; }

 private:
  std::size_t index_;
  BoundSide side_;
};

class VariantMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySequence : public Error {
 public:
  using Error::Error;
};

class NoCommonPrefix : public Error {
 public:
  using Error::Error;
};

/// The two directed powers straddle an integer, so more digits are needed.
class PrecisionInsufficient : public Error {
 public:
  explicit PrecisionInsufficient(std::size_t index)
      : Error("precision insufficient to verify index " +
              std::to_string(index)),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ExponentTooLarge : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Cache file is malformed or its contents fail re-verification.
class CacheError : public Error {
 public:
  using Error::Error;
};

}  // namespace millscale
