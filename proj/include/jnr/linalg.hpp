#pragma once

#include <cstdint>
#include <random>

#include "jnr/types.hpp"

namespace jnr {

// Relative termination threshold of the Jacobi sweep (off-diagonal Frobenius
// mass against the input norm) and the sweep cap.
inline constexpr double kEigTol = 1e-13;
inline constexpr int kMaxSweeps = 50;

// Relative tolerance for accepting a matrix as Hermitian.  Inputs routinely
// come from text files with rounded entries.
inline constexpr double kHermTol = 1e-10;

/// Eigendecomposition of a Hermitian matrix.  values are sorted descending;
/// column j of vectors pairs with values[j].
struct HermitianEig {
  RVector values;
  CMatrix vectors;
};

/// Deterministic random source.  All randomness in the library and tests
/// flows from an explicit 64-bit seed through std::mt19937_64; Gaussians are
/// produced by an explicit Box-Muller transform so the byte stream does not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal();
  Complex complex_normal() { return Complex(normal(), normal()); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

bool is_hermitian(const CMatrix& A, double tol = kHermTol);

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.  Throws NotHermitian when the input fails the kHermTol check
/// and NoConvergence when kMaxSweeps sweeps do not reach kEigTol.
HermitianEig herm_eig(const CMatrix& A);

/// Frobenius norm of XY - YX.
double commutator_norm(const CMatrix& X, const CMatrix& Y);

/// True when ||AA* - A*A||_F <= tol * ||A||_F^2.
bool is_normal(const CMatrix& A, double tol);

/// ||U*U - I||_F.
double unitary_defect(const CMatrix& U);

/// Haar-like deterministic unitary: complex Gaussian matrix from the seeded
/// generator, Householder QR, column phases fixed so R has positive diagonal.
CMatrix random_unitary(int n, std::uint64_t seed);

}  // namespace jnr
