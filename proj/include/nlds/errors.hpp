#pragma once

#include <stdexcept>
#include <string>

namespace nlds {

/// Raised on NaN, loss of positivity, or iteration budgets running out.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario file problems; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlds
