#pragma once

#include <vector>

#include "jnr/linalg.hpp"
#include "jnr/types.hpp"

namespace jnr {

struct WeightSpec;

/// Ordered family of same-sized square complex matrices.
struct MatrixTuple {
  std::vector<CMatrix> A;

  MatrixTuple() = default;
  explicit MatrixTuple(std::vector<CMatrix> a);

  int dim() const { return A.empty() ? 0 : static_cast<int>(A[0].rows()); }
  int size() const { return static_cast<int>(A.size()); }
  bool all_hermitian(double tol = kHermTol) const;
};

/// Hermitian and skew parts (H_1, ..., H_{2m}) with A_j = H_{2j-1} + i H_{2j}.
/// Exact-zero members are kept so indices stay aligned with the tuple.
std::vector<CMatrix> hermitian_expand(const MatrixTuple& t);

/// The tuple itself when every member is Hermitian, otherwise its expansion.
MatrixTuple effective_hermitian(const MatrixTuple& t);

/// Maximal linearly independent sub-collection of F in input order.
/// Gram-Schmidt on vectorized matrices under the Frobenius inner product; a
/// member joins when its residual exceeds tol times its own norm.
MatrixTuple span_basis(const std::vector<CMatrix>& F, double tol = 1e-9);

/// Invertible linear map plus offset acting on tuples and on range points.
struct AffineMap {
  CMatrix R;
  CVector f;
};

/// B_i = sum_j R(i,j) A_j + f_i I.  Throws SingularMap when the condition
/// estimate of R exceeds 1e12.
MatrixTuple apply_affine(const MatrixTuple& t, const AffineMap& map);

/// p -> R p + f applied to each point.
std::vector<CVector> apply_affine(const std::vector<CVector>& points, const AffineMap& map);

enum class Flatness { Singleton, Segment, Higher };

struct FlatReport {
  Flatness kind = Flatness::Higher;
  CMatrix segment_direction;  // non-scalar Hermitian witness when Segment
};

/// Classification of the joint range as a point, a segment, or neither.
/// Works on the Hermitian parts; the weight only supplies the non-scalar
/// precondition (ScalarWeight otherwise).
FlatReport classify_flat(const MatrixTuple& t, const WeightSpec& C, double tol = 1e-9);

}  // namespace jnr
