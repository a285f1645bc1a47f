#ifndef KHL_ERRORS_HPP
#define KHL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace khl {

/// Base class of every error raised by the library. The message names the
/// failing operation as `module::operation: detail`.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (mu not in (0,1), negative x, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The Jacobi sweep cap was exhausted before the off-diagonal mass fell below tolerance.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, double achieved_off_norm)
        : Error(what), achieved_off_norm_(achieved_off_norm) {}
    double achieved_off_norm() const noexcept { return achieved_off_norm_; }

private:
    double achieved_off_norm_;
};

/// A spectral threshold sits within the guard distance of an eigenvalue.
class ThresholdTooClose : public Error {
public:
    ThresholdTooClose(const std::string& what, double distance)
        : Error(what), distance_(distance) {}
    double distance() const noexcept { return distance_; }

private:
    double distance_;
};

/// The grid does not resolve the oscillation scale, or test functions leave the window.
class ResolutionError : public Error {
public:
    using Error::Error;
};

}  // namespace khl

#endif  // KHL_ERRORS_HPP
