#pragma once

#include <stdexcept>
#include <string>

namespace dlra {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// NaN or Inf entries where only finite values are admitted.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// A generator that should be skew-symmetric is not.
class SymmetryError : public Error {
public:
    using Error::Error;
};

/// Requested rank is outside [1, min(m, n)] or otherwise inconsistent.
class RankError : public Error {
public:
    using Error::Error;
};

/// The r x r core factor is too ill-conditioned to be inverted.
///
/// Raised by the gauged right-hand side; this is the breakdown that
/// standard integrators hit under over-approximation.
class SingularCoreError : public Error {
public:
    SingularCoreError(double condition, double cap)
        : Error("core factor condition number " + std::to_string(condition) +
                " exceeds cap " + std::to_string(cap)),
          condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// The implicit-midpoint fixed-point iteration did not converge.
class FixedPointDiverged : public Error {
public:
    FixedPointDiverged(int iterations, double last_increment)
        : Error("fixed-point iteration diverged after " + std::to_string(iterations) +
                " iterations (last increment " + std::to_string(last_increment) + ")"),
          iterations_(iterations),
          last_increment_(last_increment) {}

    int iterations() const noexcept { return iterations_; }
    double last_increment() const noexcept { return last_increment_; }

private:
    int iterations_;
    double last_increment_;
};

/// Invalid experiment or CLI configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed serialized data.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace dlra
