#pragma once

#include <stdexcept>
#include <string>

namespace qtomo {

// Base class for failures where a result cannot be trusted or computed.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A matrix that must be positive semidefinite has a significantly negative eigenvalue.
class NotPsdError : public NumericError {
  using NumericError::NumericError;
};

// Requested purification rank is too small for the state's spectrum.
class RankDeficitError : public NumericError {
  using NumericError::NumericError;
};

// The protocol does not determine the state (fewer than s^2 independent rows).
class IncompleteProtocolError : public NumericError {
 public:
  IncompleteProtocolError(const std::string& what, int q) : NumericError(what), completeness(q) {}
  int completeness;
};

// Some measurement row has zero intensity at the true state; the asymptotic
// loss distribution is undefined there.
class BoundaryStateError : public NumericError {
 public:
  BoundaryStateError(const std::string& what, int row) : NumericError(what), row_index(row) {}
  int row_index;
};

// Distribution moments are undefined (zero variance).
class UndefinedMomentError : public NumericError {
  using NumericError::NumericError;
};

// A spectral gap needed to single out one value is absent.
class DegenerateSpectrumError : public NumericError {
  using NumericError::NumericError;
};

// The residual test has no degrees of freedom left.
class NotTestableError : public NumericError {
  using NumericError::NumericError;
};

}  // namespace qtomo
