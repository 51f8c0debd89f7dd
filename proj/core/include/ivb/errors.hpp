#pragma once

#include <stdexcept>
#include <string>

namespace ivb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// observed
struct EmptyLevel : Error { using Error::Error; };
struct DuplicateCell : Error { using Error::Error; };
struct InfeasibleTriple : Error { using Error::Error; };

// witness
struct P000OutOfRange : Error { using Error::Error; };
struct MarginMismatch : Error { using Error::Error; };
struct InfeasibleLaw : Error { using Error::Error; };

// oracle
struct OracleSizeExceeded : Error { using Error::Error; };
struct InternalUnbounded : Error { using Error::Error; };

// identities
struct WrongK : Error { using Error::Error; };
struct IdentityViolation : Error { using Error::Error; };

// synthetic
struct SizeExceeded : Error { using Error::Error; };

// i/o
struct ParseError : Error { using Error::Error; };

}  // namespace ivb
