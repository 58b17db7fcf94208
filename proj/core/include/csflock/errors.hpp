#pragma once

#include <stdexcept>
#include <string>

namespace csflock {

/// Operands disagree on agent count, spatial dimension or matrix shape.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric parameter lies outside the range an operation accepts
/// (time step too large, hR >= 1, ...).
class ParameterError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Structural input that violates a type invariant (self-loop, negative
/// matrix entry, N < 2 where a reference agent is needed, ...).
class InvariantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace csflock
