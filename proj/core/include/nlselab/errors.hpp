#pragma once

#include <stdexcept>
#include <string>

namespace nlselab {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad argument values (non-positive lengths, too-small grids, ...).
class InvalidArgumentError : public Error {
public:
  using Error::Error;
};

/// Two fields live on incompatible grids.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// A field is identically zero where a logarithm or quotient needs it.
class DegenerateFieldError : public Error {
public:
  using Error::Error;
};

/// Requested wavenumber cannot be represented on the grid.
class AliasingError : public Error {
public:
  using Error::Error;
};

/// Time step violates the explicit-integrator stability guard.
class StabilityError : public Error {
public:
  using Error::Error;
};

/// Field amplitude exceeded the runaway threshold during evolution.
class BlowUpError : public Error {
public:
  BlowUpError(const std::string& what, double time, long step)
      : Error(what), t(time), step_index(step) {}
  double t = 0.0;
  long step_index = 0;
};

/// Operation is not defined for the requested model variant.
class NotApplicableError : public Error {
public:
  using Error::Error;
};

/// An assumed exact solution drifted away from its expected shape.
class NotASolutionError : public Error {
public:
  using Error::Error;
};

/// Least-squares normal equations are singular beyond recovery.
class RankDeficiencyError : public Error {
public:
  RankDeficiencyError(const std::string& what, std::string history)
      : Error(what), damping_history(std::move(history)) {}
  std::string damping_history;
};

/// Adjacent phase jump of pi or more; winding cannot be resolved.
class PhaseUnwrapError : public Error {
public:
  using Error::Error;
};

/// A localized profile does not fit the periodic domain.
class DomainTooSmallError : public Error {
public:
  using Error::Error;
};

/// Experiment configuration failed to parse or validate.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace nlselab
