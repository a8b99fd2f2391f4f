#pragma once

#include <stdexcept>
#include <string>

namespace sparse_arith {

// Domain errors carry a stable machine-readable kind so the CLI can render
// them uniformly and tests can assert on the failure class rather than on
// message wording.
class error : public std::runtime_error {
public:
    error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define SPARSE_ARITH_ERROR(NAME, KIND)                                    \
    class NAME : public error {                                           \
    public:                                                               \
        explicit NAME(const std::string& msg) : error(KIND, msg) {}       \
    }

SPARSE_ARITH_ERROR(invalid_sequence, "InvalidSequence");
SPARSE_ARITH_ERROR(index_beyond_horizon, "IndexBeyondHorizon");
SPARSE_ARITH_ERROR(window_too_small, "WindowTooSmall");
SPARSE_ARITH_ERROR(precondition_violated, "PreconditionViolated");
SPARSE_ARITH_ERROR(not_bounded_in_range, "NotBoundedInRange");
SPARSE_ARITH_ERROR(ambient_mismatch, "AmbientMismatch");
SPARSE_ARITH_ERROR(undecidable_on_window, "UndecidableOnWindow");
SPARSE_ARITH_ERROR(zero_has_no_coset, "ZeroHasNoCoset");
SPARSE_ARITH_ERROR(unique_minimum, "UniqueMinimum");
SPARSE_ARITH_ERROR(size_budget_exceeded, "SizeBudgetExceeded");
SPARSE_ARITH_ERROR(not_monotone, "NotMonotone");
SPARSE_ARITH_ERROR(ambiguous_case, "AmbiguousCase");
SPARSE_ARITH_ERROR(window_exhausted, "WindowExhausted");
SPARSE_ARITH_ERROR(division_by_zero, "DivisionByZero");
SPARSE_ARITH_ERROR(insufficient_data, "InsufficientData");
SPARSE_ARITH_ERROR(no_dominant, "NoDominant");
SPARSE_ARITH_ERROR(unknown_sequence, "UnknownSequence");
SPARSE_ARITH_ERROR(unknown_identifier, "UnknownIdentifier");
SPARSE_ARITH_ERROR(unbound_variable, "UnboundVariable");
SPARSE_ARITH_ERROR(registry_error, "RegistryError");

#undef SPARSE_ARITH_ERROR

// Syntax errors remember where parsing stopped.
class syntax_error : public error {
public:
    syntax_error(const std::string& msg, std::size_t offset)
        : error("SyntaxError", msg + " at offset " + std::to_string(offset)),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Bad command lines exit with a distinct status (2, not 1).
class usage_error : public error {
public:
    explicit usage_error(const std::string& msg) : error("UsageError", msg) {}
};

} // namespace sparse_arith
