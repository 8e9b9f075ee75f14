#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace disjinv
{

// Root of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class SubstitutionError : public Error
{
public:
    using Error::Error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

// Input-format errors carry a 1-based source position (0 when unknown).
class FrontendError : public Error
{
public:
    FrontendError( const std::string& what, std::size_t line = 0, std::size_t column = 0 )
            : Error( line ? std::to_string( line ) + ":" + std::to_string( column ) + ": " + what : what ),
              _line{ line }, _column{ column }
    {
    }

    [[nodiscard]] std::size_t line() const { return _line; }
    [[nodiscard]] std::size_t column() const { return _column; }

private:
    std::size_t _line;
    std::size_t _column;
};

class SyntaxError : public FrontendError
{
public:
    using FrontendError::FrontendError;
};

class UndeclaredVariable : public FrontendError
{
public:
    using FrontendError::FrontendError;
};

class SortMismatch : public FrontendError
{
public:
    using FrontendError::FrontendError;
};

class NonlinearAtom : public FrontendError
{
public:
    using FrontendError::FrontendError;
};

class DuplicateDefinition : public FrontendError
{
public:
    using FrontendError::FrontendError;
};

class InstantaneousCycle : public FrontendError
{
public:
    using FrontendError::FrontendError;
};

class UnsupportedInit : public FrontendError
{
public:
    using FrontendError::FrontendError;
};

// A declared variable used where its kind is not allowed, e.g. a prime outside `trans`.
class ScopeError : public FrontendError
{
public:
    using FrontendError::FrontendError;
};

class SolverError : public Error
{
public:
    using Error::Error;
};

class SolverSpawnError : public SolverError
{
public:
    using SolverError::SolverError;
};

class SolverCrashed : public SolverError
{
public:
    using SolverError::SolverError;
};

class UnsupportedSort : public SolverError
{
public:
    using SolverError::SolverError;
};

class UndeclaredSolverVariable : public SolverError
{
public:
    using SolverError::SolverError;
};

class UnbalancedPop : public SolverError
{
public:
    using SolverError::SolverError;
};

class NoPredicates : public Error
{
public:
    NoPredicates() : Error( "no predicates: the system declares no state predicates" ) {}
};

// The in-engine Hoare re-check rejected a candidate the refinement loop accepted.
class SoundnessGateFailure : public Error
{
public:
    using Error::Error;
};

class CapExceeded : public Error
{
public:
    using Error::Error;
};

} // namespace disjinv
