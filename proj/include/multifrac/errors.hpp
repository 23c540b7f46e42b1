// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace multifrac {

/// Base of every error this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, arguments, or operator/grid usage (CLI exit 2).
struct ConfigError : Error {
    using Error::Error;
};

/// Runtime numerical failure (CLI exit 3).
struct NumericalError : Error {
    using Error::Error;
};

struct UnknownSpec : ConfigError {
    using ConfigError::ConfigError;
};

struct DomainMismatch : ConfigError {
    using ConfigError::ConfigError;
};

struct TooLarge : ConfigError {
    using ConfigError::ConfigError;
};

struct BackendDomainMismatch : ConfigError {
    using ConfigError::ConfigError;
};

struct OrderOutOfRange : ConfigError {
    using ConfigError::ConfigError;
};

struct NotDiagonalizable : ConfigError {
    using ConfigError::ConfigError;
};

/// Evaluation requested at a point where the measure weight diverges.
struct SingularPoint : NumericalError {
    using NumericalError::NumericalError;
};

/// Measure weight v(x) is not strictly positive on the grid.
struct NegativeWeight : NumericalError {
    using NumericalError::NumericalError;
};

struct QuadratureFailure : NumericalError {
    using NumericalError::NumericalError;
};

struct ResonantMode : NumericalError {
    using NumericalError::NumericalError;
};

struct SingularJacobian : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace multifrac
