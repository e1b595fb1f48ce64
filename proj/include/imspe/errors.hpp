#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imspe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments: out-of-domain points, non-positive theta, dimension mismatch.
struct ValidationError : Error {
    using Error::Error;
};

// Evaluation at a point where the requested form has no value (twin points, delta = 0).
struct DomainError : Error {
    using Error::Error;
};

struct NearSingularError : Error {
    NearSingularError(std::size_t i, std::size_t j, double condition, const std::string& what)
        : Error(what), first(i), second(j), condition(condition) {}
    std::size_t first;
    std::size_t second;
    double condition;
};

struct SolverError : Error {
    SolverError(double condition, const std::string& what) : Error(what), condition(condition) {}
    double condition;
};

struct QuadratureError : Error {
    using Error::Error;
};

}  // namespace imspe
