#pragma once

#include <stdexcept>
#include <string>

namespace kronecker {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input. The CLI maps these to exit code 2.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class EpsilonOutOfRange : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class ZeroLambda : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Resource exhaustion. The CLI maps these to exit code 3.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

// Enclosures too wide to decide a comparison. Callers holding the exact
// source of their inputs retry at a higher precision.
class PrecisionExhausted : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

// nearest_int / floor / ceil of an enclosure that spans a rounding boundary.
class AmbiguousEnclosure : public PrecisionExhausted {
 public:
  using PrecisionExhausted::PrecisionExhausted;
};

}  // namespace kronecker
