#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqm {

enum class ErrorKind {
    IdenticalSets,
    QuotaExceedsPool,
    InvalidPartition,
    EnumerationTooLarge,
    NotEnumerable,
    QuotaOverflow,
    InvalidOrdering,
    DomainError,
    TooSmall,
    TieDetected,
    NotInClass,
    InvalidDomain,
    TooLarge,
    UnsupportedPreference,
    InvalidInput,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace sqm
