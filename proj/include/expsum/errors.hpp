#pragma once

#include <stdexcept>
#include <string>

namespace expsum {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the mathematical input failed (bad prime, bad degree, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An enumeration, grid or table would exceed its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed polynomial text or data file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A variety chain failed its descending containment check.
class ChainError : public Error {
 public:
  using Error::Error;
};

/// A power-sum sequence is too short for the recurrence rank it exhibits.
class RankError : public Error {
 public:
  using Error::Error;
};

}  // namespace expsum
