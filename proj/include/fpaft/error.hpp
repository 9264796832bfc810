#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace fpaft {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (CSV parse failures, invariant violations, bad configs).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Knot placement impossible: too few distinct values for the requested df.
class DegenerateKnotsError : public DataError {
 public:
  using DataError::DataError;
};

/// The model has more free parameters than the data can identify.
class IdentifiabilityError : public DataError {
 public:
  using DataError::DataError;
};

/// A numerical quantity is undefined (score outside the support, singular information, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

using WarningHandler = std::function<void(const std::string&)>;

/// Installs the sink for non-fatal warnings (knot collapse, ...). Returns the previous handler.
/// The default handler writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace fpaft
