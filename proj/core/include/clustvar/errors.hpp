#pragma once

#include <stdexcept>
#include <string>

namespace clustvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unusable input: bad CSV, duplicate names, constant columns,
/// invalid configuration.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A computation that cannot be carried out on otherwise valid input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A variable became unstandardizable on a subsample: a category level with
/// no rows, or a quantitative column with zero variance.
class RareCategoryError : public NumericalError {
 public:
  RareCategoryError(std::string variable, const std::string& what)
      : NumericalError(what), variable_(std::move(variable)) {}

  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

}  // namespace clustvar
