#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace dmabo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed arguments that violate an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Factorization failed even after jitter escalation. Carries the round of
/// the optimization loop when raised from inside a run.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::optional<int> round = std::nullopt)
      : Error(round ? what + " (round " + std::to_string(*round) + ")" : what), round_(round) {}

  std::optional<int> round() const { return round_; }

 private:
  std::optional<int> round_;
};

/// A problem instance cannot be built or is infeasible on its grid.
class InstanceError : public Error {
 public:
  using Error::Error;
};

/// The agent/coordinator message contract was violated.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// An experiment configuration failed to parse or validate.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace dmabo
