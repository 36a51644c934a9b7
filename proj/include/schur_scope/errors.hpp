#pragma once

#include <stdexcept>
#include <string>

namespace schur_scope {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the closed disk (or other domain violation).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The cleared preimage polynomial vanishes identically.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Root refinement failed to reach the requested residual.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// N_phi is undefined at phi(0).
class BasePointError : public Error {
 public:
  using Error::Error;
};

/// A theorem-level precondition (range of h, disk placement, ...) is violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Log-log fit impossible because some sample is zero.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Maximal function vanishes; the homogeneity property is vacuous.
class ZeroMaximalError : public Error {
 public:
  using Error::Error;
};

/// Symbol rejected at load time (not a self-map, degree too large, bad field).
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace schur_scope
