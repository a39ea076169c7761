#pragma once

#include <stdexcept>
#include <string>

namespace umet {

// Malformed or inconsistent input data (files, records, tables).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration (scenario values, policy specs, grids).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace umet
