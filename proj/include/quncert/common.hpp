#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace quncert {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerance tiers shared by every module.
inline constexpr double kTauExact = 1e-9;   // closed-form quantities
inline constexpr double kTauOpt = 2e-3;     // optimizer-dependent quantities
inline constexpr double kEq1Tolerance = 1e-7;
inline constexpr double kNegativeEigenvalueFloor = 1e-10;
inline constexpr double kRankThreshold = 1e-12;
inline constexpr double kOutcomeProbabilityFloor = 1e-12;

inline constexpr std::size_t kMaxTotalDim = 64;
// Pure states may carry a purifying ancilla as large as the system itself.
inline constexpr std::size_t kMaxPureDim = kMaxTotalDim * kMaxTotalDim;

/// Base class of every error raised by the library. The CLI maps the
/// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonHermitian : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class BadSubsystemIndex : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DimTooLarge : public DimensionMismatch {
 public:
  using DimensionMismatch::DimensionMismatch;
};

class NotAQubit : public DimensionMismatch {
 public:
  using DimensionMismatch::DimensionMismatch;
};

class NotTwoQubits : public DimensionMismatch {
 public:
  using DimensionMismatch::DimensionMismatch;
};

class IncompleteBasis : public Error {
 public:
  using Error::Error;
};

class ParamOutOfRange : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace quncert
