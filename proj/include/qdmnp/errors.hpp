#pragma once

#include <stdexcept>
#include <string>

namespace qdmnp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class ValidationError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class NoResonanceError : public Error { using Error::Error; };
class ModelError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class NotFoundError : public Error { using Error::Error; };

/// Numerical failures of the solvers (steady state, propagation, closures).
class SolverError : public Error { using Error::Error; };
class NonUniqueSteadyStateError : public SolverError { using SolverError::SolverError; };
class ConvergenceError : public SolverError { using SolverError::SolverError; };
class StiffnessError : public SolverError { using SolverError::SolverError; };
class GridTooShortError : public SolverError { using SolverError::SolverError; };
class UndefinedCorrelationError : public SolverError { using SolverError::SolverError; };

}  // namespace qdmnp
