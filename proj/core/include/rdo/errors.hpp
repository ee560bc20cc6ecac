#pragma once

#include <stdexcept>
#include <string>

namespace rdo {

// Caller broke a precondition (length mismatch, out-of-bounds input, ...).
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation (|Delta| >= 1, a
// field point inside a conductor, non-positive material constants).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Invalid run or algorithm configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ReductionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IdentificationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EvaluationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void throw_contract(const std::string& what);

} // namespace rdo
