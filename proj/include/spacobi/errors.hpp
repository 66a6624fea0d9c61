#pragma once

#include <stdexcept>
#include <string>

namespace spacobi {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NonSquareError : public Error {
 public:
  using Error::Error;
};

class AsymmetricInputError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

class BadDimensionError : public Error {
 public:
  using Error::Error;
};

class BadStepSizeError : public Error {
 public:
  using Error::Error;
};

class SingularPairError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class NegativeSigmaError : public Error {
 public:
  using Error::Error;
};

class BadNeighborCountError : public Error {
 public:
  using Error::Error;
};

class AllZeroWeightsError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class DegenerateTruthError : public Error {
 public:
  using Error::Error;
};

class EmptyPathError : public Error {
 public:
  using Error::Error;
};

class BadSpecError : public Error {
 public:
  using Error::Error;
};

// CSV parse failure; carries the 1-based line number of the offending row.
class CsvParseError : public Error {
 public:
  CsvParseError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spacobi
