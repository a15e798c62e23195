#pragma once

#include <stdexcept>
#include <string>

namespace mlab {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Path passes too close to a singular point.
struct ProximityError : NumericError {
    using NumericError::NumericError;
};

struct AccuracyError : NumericError {
    using NumericError::NumericError;
};

// A quantity that must be an integer (or satisfy an exact identity) is not.
struct ConsistencyError : NumericError {
    using NumericError::NumericError;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnsupportedStructure : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace mlab
