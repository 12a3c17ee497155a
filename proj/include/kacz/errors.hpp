#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kacz {

// Base of all library errors. The CLI maps subclasses to exit codes:
// numerical failures -> 2, IO/format failures -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error {
  using Error::Error;
};

struct NotSymmetric : Error {
  using Error::Error;
};

struct NotOrthogonal : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  using Error::Error;
};

// Carries the 1-based index of the offending row.
struct ZeroRow : Error {
  std::size_t row;
  ZeroRow(const std::string& msg, std::size_t row_index)
      : Error(msg), row(row_index) {}
};

struct Empty : Error {
  using Error::Error;
};

struct Inconsistent : Error {
  using Error::Error;
};

struct ExhaustedTries : Error {
  using Error::Error;
};

struct NonPositiveMu : Error {
  using Error::Error;
};

struct SingularSystem : Error {
  using Error::Error;
};

struct IndexOut : Error {
  using Error::Error;
};

struct MalformedCsv : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Argument outside the documented domain (e.g. epsilon not in (0,1)).
struct DomainError : Error {
  using Error::Error;
};

}  // namespace kacz
