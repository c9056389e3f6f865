#pragma once

#include <stdexcept>
#include <string>

namespace mixedfrac {

/// Invalid run configuration or problem data.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Singular systems, diverging iterations, failed quadrature.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mixedfrac
