#pragma once

#include <stdexcept>
#include <string>

namespace abeltheta {

// All domain errors derive from Error so callers can distinguish bad input
// (Error) from identity violations (IdentityError, the scientific alarm).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisibilityError : Error { using Error::Error; };
struct PositivityError : Error { using Error::Error; };
struct AsymmetryError : Error { using Error::Error; };
struct NotPositiveDefiniteError : Error { using Error::Error; };
struct SingularSystemError : Error { using Error::Error; };
struct DegenerateBasisError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct MembershipError : Error { using Error::Error; };
struct NotSymplecticError : Error { using Error::Error; };
struct NonIntegralError : Error { using Error::Error; };
struct DiagramMismatchError : Error { using Error::Error; };
struct IllConditionedError : Error { using Error::Error; };
struct CapExceededError : Error { using Error::Error; };
struct NotBijectiveError : Error { using Error::Error; };
struct HypothesisError : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };

// Raised when a measured determinant falls outside the asserted
// root-of-unity group.  Exit code 2 territory.
struct IdentityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ClassificationError : IdentityError { using IdentityError::IdentityError; };

} // namespace abeltheta
