#pragma once

#include <stdexcept>
#include <string>

namespace texmix {

// Broken preconditions: bad dimensions, shape mismatches, out-of-range weights.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File-level failures: unreadable images, malformed weight files, write errors.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config documents that fail schema validation. Messages carry JSON pointer paths.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numeric contract violations detected at run time.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inverse transform asked for a real result but the imaginary residue was too large.
class NonRealResult : public NumericError {
public:
    NonRealResult(double residue, double tolerance)
        : NumericError("inverse transform result is not real: max |imag| = " +
                       std::to_string(residue) + " exceeds " + std::to_string(tolerance)),
          residue(residue) {}
    double residue;
};

// Optimization produced a non-finite loss; `iteration` is where it happened.
class DivergenceError : public NumericError {
public:
    explicit DivergenceError(int iteration)
        : NumericError("loss became non-finite at iteration " + std::to_string(iteration)),
          iteration(iteration) {}
    int iteration;
};

// Weight-file parse failures, one kind per failure mode.
class WeightsError : public IoError {
public:
    enum class Kind { BadMagic, Truncated, BadLayout };

    WeightsError(Kind kind, const std::string& what) : IoError(what), kind(kind) {}
    Kind kind;
};

}  // namespace texmix
