#pragma once

#include <stdexcept>
#include <string>

namespace mlrid {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A morphology or robot description does not fit the robot it is applied to.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Caller supplied an out-of-contract argument.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A request would exceed a configured resource cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (e.g. a spectrum lost conjugate symmetry).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// The surrogate refused to simulate a morphology.
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// End-to-end pipeline could not proceed.
class PipelineError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlrid
