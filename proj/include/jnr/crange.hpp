#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "jnr/family.hpp"
#include "jnr/types.hpp"

namespace jnr {

/// Weight vector c_1 >= ... >= c_n with c_1 > c_n, its distinct blocks and
/// the breakpoint index gamma.
struct WeightSpec {
  int n = 0;
  RVector c;                                      // descending
  std::vector<std::pair<double, int>> distinct;   // (xi_i, n_i), xi strictly descending
  std::vector<int> breakpoints;                   // 1-based j with c_j > c_{j+1}
  int gamma = 0;
  int krange = 0;                                 // k when built as a k-range, else 0

  bool is_krange() const { return krange > 0; }
  CMatrix matrix() const;                          // diag(c) as a complex matrix
};

/// gamma of a descending weight vector:
/// max({j <= n/2 : c_j > c_{j+1}} u {n-j <= n/2 : c_j > c_{j+1}}).
int weight_gamma(const RVector& sorted_c);

/// k-range weight (1,...,1,0,...,0) with k ones; requires 1 <= k <= n-1.
WeightSpec make_weight(int k, int n);

/// General weight; the entries are sorted descending.  Throws ScalarWeight
/// when all entries coincide.
WeightSpec make_weight(RVector c);

/// One support evaluation in direction v: the value h, the maximizer point,
/// and the eigenvalue gaps of v.A at the weight breakpoints.
struct SupportProbe {
  RVector v;
  double h = 0.0;
  RVector point;
  std::vector<double> gaps;   // aligned with WeightSpec::breakpoints
  bool degenerate = false;    // some breakpoint gap vanished; point non-unique
  CMatrix maximizer;          // unitary with descending diagonalization of v.A
};

/// Half-space {a : v.a <= h}.
struct Halfspace {
  RVector v;
  double h = 0.0;
};

/// max_j ||A_j||_F * ||c||_1; the relative scale of all range tolerances.
double tuple_scale(const MatrixTuple& t, const WeightSpec& C);

/// Support of the convex hull of the joint range in direction v (unit within
/// 1e-12): h = sum_j c_j lambda_j(v.A) with the maximizer point attached.
SupportProbe support(const MatrixTuple& t, const WeightSpec& C, const RVector& v);

/// The range point (tr C U*A_1 U, ..., tr C U*A_m U) for a given unitary.
CVector point_at(const MatrixTuple& t, const WeightSpec& C, const CMatrix& U);

struct Boundary2D {
  std::vector<double> thetas;
  std::vector<Halfspace> outer;
  std::vector<Eigen::Vector2d> inner;
};

/// Planar boundary scan at angles theta_i = 2*pi*i/n_dirs (n_dirs >= 8).
Boundary2D boundary2d(const CMatrix& X, const CMatrix& Y, const WeightSpec& C, int n_dirs);

/// Convex hull of planar points with tolerance-based dedup and collinearity
/// pruning, counter-clockwise starting from the lexicographic minimum.
std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts,
                                            double rel_tol = 1e-7);

/// Checks the identity between the k-range and the (n-k)-range supports
/// through the trace point, direction by direction.
bool wk_complement_check(const MatrixTuple& t, int k, const std::vector<RVector>& dirs,
                         double tol = 1e-9);

/// All n! permutation points of a diagonal Hermitian tuple, deduplicated.
/// Guarded by TooLarge for n > 8.
std::vector<RVector> diagonal_vertices(const MatrixTuple& D, const WeightSpec& C);

/// Deterministic direction set on the unit sphere of R^m.  m = 1 gives
/// {+1, -1}; m = 2 uniform angles; m >= 3 a seeded Kronecker lattice mapped
/// through Box-Muller plus the axis and sign directions.
std::vector<RVector> sample_directions(int m, int n_dirs, std::uint64_t seed);

}  // namespace jnr
