#pragma once

#include <stdexcept>

namespace ttsched {

/// Inconsistent or out-of-range configuration (topology, periods, flows, CLI flags).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An edge copy requested for occupation is already taken.
class ConflictError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownFlowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (topology file, CSV, LP file).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Instance exceeds the exact solver's configured limits.
class LimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ttsched
