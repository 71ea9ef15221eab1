#pragma once

#include <stdexcept>
#include <string>

namespace anchorhash {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (zero range, empty set, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// remove_bucket() on a bucket that is not working.
class InvalidRemoval : public Error {
 public:
  using Error::Error;
};

// remove_bucket() would leave the working set empty.
class LastBucketError : public Error {
 public:
  using Error::Error;
};

// add_bucket() with every anchor bucket already working.
class CapacityExhausted : public Error {
 public:
  using Error::Error;
};

class DuplicateResource : public Error {
 public:
  using Error::Error;
};

class UnknownResource : public Error {
 public:
  using Error::Error;
};

class LastResourceError : public Error {
 public:
  using Error::Error;
};

// Invalid algorithm parameters (non-prime Maglev table, bad copy count, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Snapshot bytes failed the checksum, were truncated, or decode to a state
// that violates the structural invariants.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class TierMismatch : public IntegrityError {
 public:
  using IntegrityError::IntegrityError;
};

}  // namespace anchorhash
