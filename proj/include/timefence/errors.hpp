#pragma once

#include <stdexcept>
#include <string>

namespace timefence {

// Invalid scenario/config input. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown (non-PD covariance, diverging solver). Exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Estimator asked for more data than the series provides.
class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

// Satellite geometry cannot support the requested solve.
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// A clock was read at an instant it has not been propagated to.
class StaleStateError : public std::runtime_error {
public:
    explicit StaleStateError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace timefence
