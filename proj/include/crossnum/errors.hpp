#pragma once

#include <stdexcept>
#include <string>

namespace crossnum {

// Base class for library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed user input: group text, sequence files, certificates, bad divisor
// pairs, out-of-range arguments. Maps to CLI exit code 2.
struct ParseError : Error {
  using Error::Error;
};

// A lemma or pipeline was invoked on data that does not satisfy its
// hypotheses. This is deliberately distinct from a false verdict.
struct HypothesisError : Error {
  using Error::Error;
};

// A configured resource guard (group order cap, enumeration cap) was hit.
// Searches report partial results instead of throwing; this type is for
// operations that cannot return partial data. Maps to CLI exit code 3.
struct LimitError : Error {
  using Error::Error;
};

// A proved inequality failed on concrete data. With valid hypotheses this
// indicates an implementation bug, never expected input. Maps to CLI exit
// code 1.
struct ViolationError : Error {
  using Error::Error;
};

}  // namespace crossnum
