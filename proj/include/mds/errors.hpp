#pragma once

#include <stdexcept>
#include <string>

namespace mds {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two points that must be distinct coincide (within the point tolerance).
class DegeneracyError : public Error {
public:
  using Error::Error;
};

/// A value violates an algebraic invariant (for example a + b + c != 0).
class InvariantViolation : public Error {
public:
  using Error::Error;
};

/// Chart conversion hit the pole of the chart.
class ChartSingularity : public Error {
public:
  using Error::Error;
};

/// Invalid parameters or configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Input outside the domain of an operation (off-grid point, bad ordering).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A semi-metric returned a value it must never return (non-finite, zero off-diagonal).
class EvaluationError : public Error {
public:
  using Error::Error;
};

/// The structure does not behave like a monotone Moebius structure.
class StructureViolation : public Error {
public:
  using Error::Error;
};

/// Events are in the wrong causal class for the requested operation.
class CausalClassError : public Error {
public:
  using Error::Error;
};

class IdenticalEventError : public Error {
public:
  using Error::Error;
};

class ComparabilityError : public Error {
public:
  using Error::Error;
};

/// Time labels returned by an oracle are mutually inconsistent.
class OracleInconsistency : public Error {
public:
  using Error::Error;
};

/// An iterative solver failed to converge.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

class IngestionError : public Error {
public:
  using Error::Error;
};

} // namespace mds
