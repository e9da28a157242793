#pragma once

#include <stdexcept>
#include <string>

namespace gaugelab {

// Bad inputs: wrong dimensions, out-of-range parameters, malformed specs.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation could not reach its accuracy contract (budget exhausted,
// non-convergent tails, failed decay fits). The message says what to change.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Operation not defined for this object (e.g. curvature scans on a gauge
// without second derivatives).
class UnsupportedOperation : public std::logic_error {
public:
    explicit UnsupportedOperation(const std::string& what) : std::logic_error(what) {}
};

} // namespace gaugelab
