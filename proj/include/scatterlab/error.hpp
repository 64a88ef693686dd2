#pragma once

#include <stdexcept>
#include <string>

namespace scatterlab {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments: non-positive sizes, degenerate intervals, wrong model kind.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Arguments outside the mathematical domain of an operation (x = 0 for y_l, on-cone points).
class DomainError : public Error {
public:
    using Error::Error;
};

// Integrals or series whose truncation error could not be brought under tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Ill-conditioned fits and other numerical breakdowns.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Wave packet mass reached the edge of the grid.
class ReflectionError : public Error {
public:
    using Error::Error;
};

// Spectral window with no eigenvalues, or energy too close to a discrete eigenvalue.
class WindowError : public Error {
public:
    using Error::Error;
};

}  // namespace scatterlab
