#pragma once

#include <stdexcept>
#include <string>

namespace trigbessel {

// Argument outside the mathematical domain of an operation (z <= 0, theta not in (0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input that is well-formed but outside what this library implements
// (composite moduli, derivative orders beyond the configured limit, ...).
class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A precondition of the callee was violated by the caller, e.g. asking for the
// Gauss sum of a principal character through the checked entry point.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed parameter bundle (trig-sum specs, identity parameters, CLI values).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested work exceeds the configured resource ceiling.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace trigbessel
