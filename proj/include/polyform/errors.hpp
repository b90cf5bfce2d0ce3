#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyform {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument: out-of-range m, rank, non-positive coefficient, ...
struct DomainError : Error {
    using Error::Error;
};

// Coefficient tuple with gcd > 1.  Kept distinct from DomainError so callers
// can tell "malformed input" from "well-formed but imprimitive".
struct NonPrimitiveError : DomainError {
    using DomainError::DomainError;
};

// A p-adic decision ran out of search budget before reaching a certificate,
// an empty residue level, or a descent step.  Never a silent guess.
struct UndecidedError : Error {
    int64_t p;
    int64_t budget;
    UndecidedError(int64_t p_, int64_t budget_)
        : Error("p-adic decision undecided at budget (p=" + std::to_string(p_) +
                ", budget=" + std::to_string(budget_) + "); raise the budget"),
          p(p_), budget(budget_) {}
};

// Exhaustive search refused because the target exceeds the configured cap.
struct CapExceededError : DomainError {
    using DomainError::DomainError;
};

// An internal assertion of a theorem-recipe constructor failed.  This would
// falsify the implementation, not the underlying mathematics.
struct ConstructionError : Error {
    using Error::Error;
};

} // namespace polyform
