#pragma once

#include <stdexcept>
#include <string>

namespace ulln {

/// Input outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Request exceeds a configured capacity (index caps, bit budgets, integer width).
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

/// Input lacks the structure an exact algorithm relies on.
class UnsupportedInput : public std::invalid_argument {
public:
    explicit UnsupportedInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ulln
