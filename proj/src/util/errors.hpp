#pragma once

#include <stdexcept>
#include <string>

namespace sg2vec {

// Error taxonomy shared by the whole library. The C API maps each type to a
// status code; inside the library they are ordinary exceptions.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/parameter shape mismatch. Message names both shapes.
struct DimensionError : Error {
    using Error::Error;
};

// A documented precondition was violated by the caller.
struct ContractError : Error {
    using Error::Error;
};

// Malformed dataset records, unknown classes, vocabulary mismatches.
struct SchemaError : Error {
    using Error::Error;
};

// Bad configuration values or unknown config keys.
struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Scenario generator cannot satisfy the requested configuration.
struct GenerationError : Error {
    using Error::Error;
};

// Training aborted (non-finite loss, degenerate dataset).
struct TrainingError : Error {
    using Error::Error;
};

// Birds-eye projection hit a point at the horizon (w ~ 0).
struct ProjectionError : Error {
    using Error::Error;
};

}  // namespace sg2vec
