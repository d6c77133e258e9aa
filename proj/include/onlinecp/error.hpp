#pragma once

#include <stdexcept>
#include <string>

namespace onlinecp {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or flag combinations.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Singular systems, infeasible constraints, failed convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace onlinecp
