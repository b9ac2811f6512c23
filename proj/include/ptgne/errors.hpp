#pragma once

#include <stdexcept>
#include <string>

namespace ptgne {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent dimensions between problem fields or states.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A request outside what the library supports (e.g. c* for a nonlinear
/// constraint without an analytic minimum).
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a solver was violated before the run started
/// (compactness gate, disconnected graph).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Step-size underflow in the ODE engine.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double t_reached)
      : Error(what), t_reached_(t_reached) {}
  double t_reached() const { return t_reached_; }

 private:
  double t_reached_;
};

/// Non-finite state encountered during integration.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t_reached)
      : Error(what), t_reached_(t_reached) {}
  double t_reached() const { return t_reached_; }

 private:
  double t_reached_;
};

/// A postcondition on the final state failed; `quantity` names the offender.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& quantity, double value, double threshold);
  const std::string& quantity() const { return quantity_; }
  double value() const { return value_; }
  double threshold() const { return threshold_; }

 private:
  std::string quantity_;
  double value_;
  double threshold_;
};

/// Malformed run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptgne
