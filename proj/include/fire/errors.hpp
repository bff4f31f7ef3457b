#pragma once

#include <stdexcept>
#include <string>

namespace fire {

// Base for every error the library raises. Callers that only need a
// diagnostic can catch this; the subclasses exist for control flow.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownLabel : public Error { using Error::Error; };
class UnknownVariant : public Error { using Error::Error; };
class InvalidConfig : public Error { using Error::Error; };

// Provider failures.
class ProviderUnavailable : public Error { using Error::Error; };
class RateLimited : public Error { using Error::Error; };
class AuthFailure : public Error { using Error::Error; };
class EmptyQuery : public Error { using Error::Error; };
class EmptyText : public Error { using Error::Error; };
class UnknownModel : public Error { using Error::Error; };
class CacheCorrupt : public Error { using Error::Error; };

// Dataset failures.
class FileNotFound : public Error { using Error::Error; };
class SchemaMismatch : public Error { using Error::Error; };
class InsufficientClaims : public Error { using Error::Error; };

// Scoring failures.
class MissingGold : public Error { using Error::Error; };
class DuplicatePrediction : public Error { using Error::Error; };

} // namespace fire
