#pragma once

#include <stdexcept>
#include <string>

namespace hubsim {

/// Malformed configuration, input file, or inconsistent scenario setup.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A step record failed the power-balance check. This is an internal
/// consistency failure, not an operating condition; runs abort on it.
struct BalanceError : std::runtime_error {
    explicit BalanceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hubsim
