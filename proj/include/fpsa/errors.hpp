#pragma once

#include <stdexcept>
#include <string>

namespace fpsa {

/// Base of every error raised by the library. CLI exit codes are derived from
/// the concrete subtype (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration (files, flags, parameter sets).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition (e.g. dt above the stability bound).
class PreconditionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Inconsistent arguments that can only come from a programming error.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or systematic clamping during integration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A bracketing search could not be set up (e.g. range does not straddle onset).
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Process exit codes shared by the CLI: 0 ok, 2 config/usage, 3 non-convergence, 4 numerical.
enum class ExitCode : int { ok = 0, usage = 2, not_converged = 3, numerical = 4 };

ExitCode exit_code(const Error& e) noexcept;

}  // namespace fpsa
