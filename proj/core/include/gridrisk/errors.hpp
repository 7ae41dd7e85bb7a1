#pragma once

#include <stdexcept>

namespace gridrisk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or field.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A domain-type invariant does not hold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Total load cannot be met by available generation capacity.
class InfeasibleDispatch : public Error {
 public:
  using Error::Error;
};

// Reduced susceptance system could not be factorized or solved.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// Covariance repair would move a correlation by more than the tolerance.
class NotRepairable : public Error {
 public:
  using Error::Error;
};

// Not enough campaign data for the requested estimate.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Pair_max changed within the stability window.
class Unstable : public Error {
 public:
  using Error::Error;
};

// The pair is itself a blackout set, so no superset is minimal.
class NotMinimalizable : public Error {
 public:
  using Error::Error;
};

// A k present in the ledger has no set-size policy.
class MissingSetSize : public Error {
 public:
  using Error::Error;
};

class EmptyLedger : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gridrisk
