#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace goldnash {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Base class for all failures raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// lu_factor hit a pivot below the singularity threshold.
struct SingularMatrix : Error {
  using Error::Error;
};

// The working-set Schur system (or the equality Schur complement at
// initialization) is numerically singular. Under strong monotonicity and a
// full-row-rank active stack this cannot happen, so it signals either
// rank-tracking corruption or severe ill-conditioning.
struct SingularSchur : Error {
  using Error::Error;
};

// The [G E^T; E 0] saddle-point block of the dual LCP build is singular.
struct SingularKKT : Error {
  using Error::Error;
};

// Equality rows are linearly dependent with conflicting right-hand sides;
// the constraint set is empty.
struct InconsistentEqualities : Error {
  using Error::Error;
};

// Game failed validation (structure, monotonicity, or equality consistency).
struct InvalidGame : Error {
  using Error::Error;
};

// Primal LCP reformulation requested on a problem with equality constraints.
struct HasEqualities : Error {
  using Error::Error;
};

// Primal LCP reformulation requested without finite lower bounds.
struct NoBounds : Error {
  using Error::Error;
};

// Random plant generation produced a singular DC gain after retries.
struct SingularDCGain : Error {
  using Error::Error;
};

// Unreadable, unwritable, or malformed input/output files.
struct IOError : Error {
  using Error::Error;
};

// Induced infinity norm (max absolute row sum).
inline double inf_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double inf_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace goldnash
