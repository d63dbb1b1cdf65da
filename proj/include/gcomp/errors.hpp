#ifndef GCOMP_ERRORS_HPP
#define GCOMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gcomp {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidInput : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

// One of the numbered hypotheses of a conditional bound failed.
struct HypothesisError : Error {
    int condition;
    HypothesisError(int cond, const std::string& msg) : Error(msg), condition(cond) {}
};

struct ConfigError : Error {
    std::string field;
    ConfigError(std::string f, const std::string& msg) : Error(msg + " (" + f + ")"), field(std::move(f)) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ResourceError : Error {
    using Error::Error;
};

struct IOError : Error {
    using Error::Error;
};

struct BoundaryEmpty : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct DegenerateBall : Error {
    using Error::Error;
};

struct InvalidPoint : Error {
    using Error::Error;
};

struct InvalidConfig : Error {
    using Error::Error;
};

} // namespace gcomp

#endif
