#pragma once

#include <stdexcept>
#include <string>

namespace nascd {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// evaluate() hit a denominator root on the imaginary axis.
class PoleOnImaginaryAxis : public Error {
 public:
  using Error::Error;
};

/// closed_loop() with 1 + P*C identically zero.
class DegenerateLoop : public Error {
 public:
  using Error::Error;
};

/// Numerator degree exceeds denominator degree where a proper transfer
/// function is required.
class ImproperTransferFunction : public Error {
 public:
  using Error::Error;
};

/// Margin analysis requested on a loop with a pole outside the open left
/// half plane.
class UnstableClosedLoop : public Error {
 public:
  using Error::Error;
};

/// Argument outside its admissible range.
class InvalidRange : public Error {
 public:
  using Error::Error;
};

/// Markov chain is not a single communicating class.
class ReducibleChain : public Error {
 public:
  using Error::Error;
};

/// Contract parameters fail validation where a valid contract is required.
class InvalidContract : public Error {
 public:
  using Error::Error;
};

/// Timing trace breaks indexing or causality requirements.
class MalformedTrace : public Error {
 public:
  using Error::Error;
};

/// Channel-state label with no controller bank entry.
class UnknownChannelState : public Error {
 public:
  using Error::Error;
};

/// Workspace configuration failed to parse or validate.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nascd
