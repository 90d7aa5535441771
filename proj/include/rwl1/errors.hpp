#pragma once

#include <stdexcept>
#include <string>

namespace rwl1 {

/// Raised when a caller passes arguments that violate a documented precondition.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a file or text payload does not conform to the expected schema.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure of the LP machinery. The kind distinguishes an exhausted pivot
/// budget from infeasible/unbounded subproblems and from numerical breakdown.
class SolverError : public std::runtime_error {
public:
    enum class Kind { Stalled, Infeasible, Unbounded, Numerical };

    SolverError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline const char* to_string(SolverError::Kind kind) {
    switch (kind) {
    case SolverError::Kind::Stalled: return "stalled";
    case SolverError::Kind::Infeasible: return "infeasible";
    case SolverError::Kind::Unbounded: return "unbounded";
    case SolverError::Kind::Numerical: return "numerical";
    }
    return "unknown";
}

} // namespace rwl1
