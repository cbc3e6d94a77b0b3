#pragma once

#include <stdexcept>
#include <string>

namespace ld {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A popped agenda priority was lower than the previous pop.
class MonotonicityViolation : public Error {
 public:
  using Error::Error;
};

class CyclicProblem : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotDerived : public Error {
 public:
  using Error::Error;
};

class MalformedDerivation : public Error {
 public:
  using Error::Error;
};

class UnsupportedWeightFn : public Error {
 public:
  using Error::Error;
};

/// Bad user input: unknown terminals, malformed files, invalid graphs.
class InputError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid problem parameters (e.g. R not a power of two).
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace ld
