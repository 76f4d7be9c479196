#pragma once

#include <stdexcept>
#include <string>

namespace quplink {

// Invalid user-facing configuration (bad field values, malformed config files).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during a run (singular systems, non-finite samples).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class NotPositiveDefiniteError : public NumericalError {
public:
    explicit NotPositiveDefiniteError(const std::string& what) : NumericalError(what) {}
};

// File-system and serialization failures.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace quplink
