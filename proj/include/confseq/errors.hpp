#pragma once

#include <stdexcept>
#include <string>

namespace confseq {

// Error categories. The CLI maps each one to a distinct exit code.

/// Bad arguments from the caller: dimension mismatch, empty batch, lambda out of range.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Bad observations: norm bound violated, non-finite coordinates, malformed CSV rows.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Invalid configuration document or parameter combination.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int data = 3;
inline constexpr int verification = 4;
}  // namespace exit_code

}  // namespace confseq
