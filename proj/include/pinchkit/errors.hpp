#pragma once

#include <stdexcept>
#include <string>

namespace pinchkit {

// ==== error hierarchy ====
//
// Every throwing path uses one of these. Messages name the offending
// field, index, or parameter so batch reports can surface them verbatim.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// parameter outside the stated range of an operation
struct DomainError : Error {
  using Error::Error;
};

// JSON document violates the point-data schema (missing key, wrong type)
struct SchemaError : Error {
  using Error::Error;
};

// shape operator asymmetric beyond the ingestion tolerance
struct SymmetryError : Error {
  using Error::Error;
};

// matrix shape or list length disagrees with the declared (n, m)
struct DimensionError : Error {
  using Error::Error;
};

// basis / subspace argument sized inconsistently with the point data
struct DimensionMismatch : Error {
  using Error::Error;
};

// matrix passed as a projection fails P^2 = P = P^T or has wrong rank
struct NotAProjection : Error {
  using Error::Error;
};

// block structure handed to an operation fails its own invariants
struct InvalidStructure : Error {
  using Error::Error;
};

// inner ambient curvature disagrees with 1/r^2 in a composition
struct CurvatureMismatch : Error {
  using Error::Error;
};

// two independent computations of the same quantity disagree
struct InternalInconsistency : Error {
  using Error::Error;
};

// float-mode trichotomy falls inside the dead band around zero
struct AmbiguousComparison : Error {
  using Error::Error;
};

// equality verdict without detectable block structure (or vice versa)
struct ClassificationInconsistent : Error {
  using Error::Error;
};

}  // namespace pinchkit
