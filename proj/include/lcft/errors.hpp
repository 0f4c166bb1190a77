#pragma once

#include <stdexcept>
#include <string>

namespace lcft {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: wrong field, non-Eisenstein polynomial, division by zero, ...
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested operation is outside what the library supports.
class Unsupported : public Error {
public:
    using Error::Error;
};

/// Working precision was not enough to decide the result.
class PrecisionError : public Error {
public:
    PrecisionError(const std::string& what, int needed_increase)
        : Error(what + " (increase precision by at least " + std::to_string(needed_increase) + ")"),
          needed_increase_(needed_increase) {}

    int needed_increase() const { return needed_increase_; }

private:
    int needed_increase_;
};

/// A configured search or enumeration bound would be exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// A mathematical consistency check failed. Signals a bug or a false claim.
class CheckFailure : public Error {
public:
    using Error::Error;
};

} // namespace lcft
