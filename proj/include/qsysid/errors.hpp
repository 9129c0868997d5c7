#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace qsysid {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A Cholesky (or similar) factorization failed, typically from ill conditioning.
class FactorizationError : public Error {
public:
    using Error::Error;
};

/// A value falls outside every interval of a bounded quantizer.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// A measured level is not one the quantizer can emit.
class InvalidLevelError : public Error {
public:
    InvalidLevelError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
        : Error(what), index_(index) {}

    /// Sample index of the offending level, when known.
    std::optional<std::size_t> index() const { return index_; }

private:
    std::optional<std::size_t> index_;
};

/// A quantity that must be strictly positive collapsed to zero
/// (zero-variance signal, vanishing Gamma rate, empty interval).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Not enough samples for the requested estimate (N <= n, too few draws).
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Every candidate of a hyperparameter search failed.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// A single Gibbs iteration exceeded its wall-clock cap.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// A data file does not follow its documented format.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace qsysid
