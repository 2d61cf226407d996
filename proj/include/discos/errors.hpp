#pragma once

#include <stdexcept>
#include <string>

namespace discos {

// Invalid user input or configuration. The CLI maps these to exit status 2.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Unsupported or inconsistent filter / model configuration.
class ConfigError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// Argument outside the domain of an operation, e.g. x outside [a, b].
class DomainError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// Violated operation precondition that depends on several inputs jointly.
class PreconditionError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// Enumeration or convolution grew past its guard.
class SizeError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// Floating-point trouble during evaluation: non-finite ch.f. samples, ODE
// trajectories hitting a pole, negative variance estimates. Exit status 3.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace discos
