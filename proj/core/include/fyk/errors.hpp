#pragma once

#include <stdexcept>
#include <string>

namespace fyk {

// Precondition violations: invalid (n, gamma), divergent moment orders, bad shapes.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Quadrature, extrapolation or linear-solve failures.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fyk
