#pragma once

#include <stdexcept>
#include <string>

namespace qcalc {

// Base of every error raised by the library. Callers that only care about
// "the input was rejected" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two operands were required to live on disjoint factor labels.
class DisjointnessError : public Error {
 public:
  using Error::Error;
};

// A referenced factor label is unknown, or a label subset has the wrong shape
// (e.g. not a proper subset where one is required).
class LabelError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Operands live on different factor spaces.
class SpaceError : public Error {
 public:
  using Error::Error;
};

// A value violates its type invariant (not an effect, trace out of range, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Division produced an orbit of vanishing norm: conditioning on a
// probability-zero result.
class DegenerateOrbitError : public Error {
 public:
  using Error::Error;
};

class PeggingError : public Error {
 public:
  using Error::Error;
};

class ConsonanceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcalc
