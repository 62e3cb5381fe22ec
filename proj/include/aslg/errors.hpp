#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aslg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A volatility recursion produced a non-finite or overflowing value.
class FilterDivergence : public Error {
public:
    FilterDivergence(const std::string& what, std::size_t t)
        : Error(what + " (t=" + std::to_string(t) + ")"), t_(t) {}
    /// Zero-based observation index where the recursion failed.
    [[nodiscard]] std::size_t t() const noexcept { return t_; }

private:
    std::size_t t_;
};

/// A symmetric solve met a pivot at or below the singularity threshold.
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, double pivot)
        : Error(what + " (smallest pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
    [[nodiscard]] double pivot() const noexcept { return pivot_; }

private:
    double pivot_;
};

/// An iterative method did not reach its tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::size_t iterations)
        : Error(what + " (iterations=" + std::to_string(iterations) + ")"), iterations_(iterations) {}
    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

/// Model-level violation, e.g. a lag polynomial with a root inside the unit circle.
class InvalidModel : public Error {
public:
    using Error::Error;
};

/// Data acquisition and parsing failures.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace aslg
