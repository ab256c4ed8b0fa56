#pragma once

#include <stdexcept>
#include <string>

namespace postsim {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed circuit/table text. Carries a 1-based line and column.
struct SyntaxError : Error {
    SyntaxError(int line, int column, const std::string &message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line(line),
          column(column) {}
    int line;
    int column;
};

// Structurally well-formed input that violates an invariant (index out of
// range, repeated qubit, singular matrix, ...).
struct ValidationError : Error {
    using Error::Error;
};

// A stated precondition of an operation does not hold (unnormalized state,
// s = 0 instance, out-of-domain parameter, ...).
struct PreconditionViolated : Error {
    using Error::Error;
};

// Conditioning on an event of exactly zero probability.
struct ZeroProbability : Error {
    using Error::Error;
};

// Sampling from a distribution whose total mass is zero.
struct ZeroMass : ZeroProbability {
    using ZeroProbability::ZeroProbability;
};

// Gate kind outside the set a backend supports.
struct UnsupportedGate : Error {
    using Error::Error;
};

// Resource cap hit (path enumeration budget).
struct PathBudgetExceeded : Error {
    using Error::Error;
};

}  // namespace postsim
