#pragma once

#include <stdexcept>
#include <string>

namespace hwepi {

/// Invalid parameters, configuration keys or input files. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A fixed-point or root-finding routine failed to converge or bracket. Exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hwepi
