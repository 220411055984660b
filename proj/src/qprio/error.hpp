#pragma once

#include <stdexcept>
#include <string>

namespace qprio {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter or argument outside its admissible domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A requested interior root or interior maximizer does not exist for the inputs.
class NoInteriorSolution : public Error {
 public:
  using Error::Error;
};

// Internal consistency failure detected while simulating.
class SimulationError : public Error {
 public:
  using Error::Error;
};

// Malformed config or report document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qprio
