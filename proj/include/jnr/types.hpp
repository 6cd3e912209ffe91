#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace jnr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Base class of all domain errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct EmptyFamily : Error { using Error::Error; };
struct SingularMap : Error { using Error::Error; };
struct ScalarWeight : Error { using Error::Error; };
struct BadWeight : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct BadBlockSpec : Error { using Error::Error; };
struct NotProjection : Error { using Error::Error; };
struct SpectrumMismatch : Error { using Error::Error; };
struct GammaOutOfRange : Error { using Error::Error; };
struct RouteDisagreement : Error { using Error::Error; };
struct WrongArity : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct UnknownDemo : Error { using Error::Error; };
struct UnknownFormat : Error { using Error::Error; };

/// Commuting-normal failure with the offending pair attached.  Indices refer
/// to the Hermitian expansion (0-based) of the family under test.
struct NotCommutingNormalError : Error {
  int first;
  int second;
  double residual;
  NotCommutingNormalError(const std::string& what, int u, int v, double r)
      : Error(what), first(u), second(v), residual(r) {}
};

}  // namespace jnr
