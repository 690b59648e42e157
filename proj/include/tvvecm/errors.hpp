#pragma once

#include <stdexcept>
#include <string>

namespace tvvecm {

/// Base class for all library errors.  Every failure raised by this library
/// derives from Error, so callers can catch one type at the CLI boundary.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed textual input (dates, numbers, config syntax).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input values outside the mathematical domain of an operation
/// (non-positive prices before a log transform, non-finite observations, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rows out of chronological order or duplicated dates.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// Not enough observations for the requested estimation.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient regressor matrix; the message names the offending columns.
class CollinearityError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be inverted is numerically singular.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// A simulated or regenerated path diverged.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// Matrix dimensions inconsistent with the declared model.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid scalar parameter (negative smoothing ratio, zero replications, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Two series that must share a time axis do not.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// An operation that requires a fully observed panel met a masked cell.
class IncompleteDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace tvvecm
