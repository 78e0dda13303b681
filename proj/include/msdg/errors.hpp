#pragma once

#include <stdexcept>
#include <string>

namespace msdg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: mesh/flux/model parameters, malformed configs.
struct ConfigError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  double pivot;
  SingularMatrixError(const std::string& what, double p) : Error(what), pivot(p) {}
};

struct InconsistentRhsError : Error {
  double mean;
  InconsistentRhsError(const std::string& what, double m) : Error(what), mean(m) {}
};

struct BlowUpError : Error {
  long step;
  double time;
  BlowUpError(const std::string& what, long s, double t) : Error(what), step(s), time(t) {}
};

}  // namespace msdg
