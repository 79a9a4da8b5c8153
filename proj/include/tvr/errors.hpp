#pragma once

#include <stdexcept>
#include <string>

namespace tvr {

// Invalid user-supplied configuration: bad epsilon, malformed JSON, absent file.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mathematical precondition violated at runtime (tau >= H/2, eta too small, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// API misuse: mixing models from different families, empty inputs.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace tvr
