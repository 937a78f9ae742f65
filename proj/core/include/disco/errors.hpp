#pragma once

#include <stdexcept>
#include <string>

namespace disco {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Input has no direction (zero norm, empty text) and cannot be compared.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Invalid run or scenario configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A NaN or infinity appeared in an intermediate value.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace disco
