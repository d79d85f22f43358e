#pragma once

#include <stdexcept>
#include <string>

namespace kslab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad parameter value (angle out of range, eps too large, ...)
class DomainError : public Error {
public:
    using Error::Error;
};

// malformed or incomplete input data
class InputError : public Error {
public:
    using Error::Error;
};

// node budget exceeded
class ResourceError : public Error {
public:
    using Error::Error;
};

// quadrature or solver failure
class NumericError : public Error {
public:
    using Error::Error;
};

// caller violated a documented precondition on an operator
class ContractError : public Error {
public:
    using Error::Error;
};

// assembly hit coincident nodes
class AssemblyError : public Error {
public:
    using Error::Error;
};

class UnsupportedGeometry : public Error {
public:
    using Error::Error;
};

}  // namespace kslab
