#pragma once

#include <stdexcept>
#include <string>

namespace dmuss {

// Base class for every error the library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotPrimeError : Error {
  explicit NotPrimeError(const std::string& what) : Error(what) {}
};

struct DivideByZeroError : Error {
  explicit DivideByZeroError(const std::string& what) : Error(what) {}
};

struct NotSquareError : Error {
  explicit NotSquareError(const std::string& what) : Error(what) {}
};

struct ShapeMismatchError : Error {
  explicit ShapeMismatchError(const std::string& what) : Error(what) {}
};

struct IndexOutOfRangeError : Error {
  explicit IndexOutOfRangeError(const std::string& what) : Error(what) {}
};

struct RankDeficientTargetError : Error {
  explicit RankDeficientTargetError(const std::string& what) : Error(what) {}
};

struct NoUsersError : Error {
  explicit NoUsersError(const std::string& what) : Error(what) {}
};

struct NonIntegralRateError : Error {
  explicit NonIntegralRateError(const std::string& what) : Error(what) {}
};

struct DimensionMismatchError : Error {
  explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

struct TooLargeError : Error {
  explicit TooLargeError(const std::string& what) : Error(what) {}
};

// Malformed input files or JSON documents.
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace dmuss
