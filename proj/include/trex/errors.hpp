#pragma once

#include <stdexcept>
#include <string>

namespace trex {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A design column whose norm is too small to standardize safely.
class DegenerateColumn : public Error {
 public:
  DegenerateColumn(int column, const std::string& what)
      : Error(what), column(column) {}
  int column;
};

class SingularSubmatrix : public Error {
 public:
  using Error::Error;
};

// The TREX criterion is undefined when the residual sup-correlation
// collapses (exact or near-exact fit).
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class ExactFit : public Error {
 public:
  using Error::Error;
};

class FoldTooSmall : public Error {
 public:
  using Error::Error;
};

class AllFitsFailed : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int row, int col, const std::string& what)
      : Error(what), row(row), col(col) {}
  int row;
  int col;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace trex
