#pragma once

#include <stdexcept>
#include <string>

namespace eprlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: invalid parameters, grids that cannot hold the state, resource
// limits. The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A numerical contract broke while running a valid configuration. The CLI
// maps these to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class ZeroNorm : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TailLeak : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class GridMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnderResolved : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class CapExceeded : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MemoryBound : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace eprlab
