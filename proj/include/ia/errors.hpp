#ifndef IAKIT_ERRORS_HPP
#define IAKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ia {

/// Shapes of matrices or antenna/stream counts are inconsistent.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// An argument is outside the mathematical domain of the function.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical routine failed (singular factorization, detected cancellation, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative estimator exhausted its trial budget without converging.
class NonconvergenceError : public std::runtime_error {
public:
    explicit NonconvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ia

#endif
