#pragma once

#include <stdexcept>
#include <string>

namespace subgap {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (bad file, dimension mismatch, bad flag).
class InputError : public Error {
public:
    using Error::Error;
};

// A mathematical hypothesis required by the method does not hold
// (non-homogeneous map, kernel dimension != 1, comparability violated, ...).
class HypothesisError : public Error {
public:
    using Error::Error;
};

// A numerical procedure failed to converge or lost accuracy.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg, double best_estimate = 0.0)
        : Error(msg), best_estimate(best_estimate) {}
    double best_estimate;
};

} // namespace subgap
