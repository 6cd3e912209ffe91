#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "jnr/crange.hpp"
#include "jnr/family.hpp"
#include "jnr/types.hpp"

namespace jnr {

/// Simultaneous reduction U*A_jU = D_j (+) Q_j with a common diagonal block
/// of maximal size ell.  Columns 0..ell-1 of U are common eigenvectors.
struct BlockDecomposition {
  CMatrix U;
  int ell = 0;
  std::vector<RVector> D;   // per matrix: ell real diagonal values
  std::vector<CMatrix> Q;   // per matrix: (n-ell) x (n-ell) residual
};

/// Common-eigenvector extraction by iterative eigenspace refinement.  The
/// space is split along eigenvalue clusters of each member in turn; stable
/// subspaces yield candidates through the kernel of the stacked residual
/// maps, and candidates are validated against the original matrices.
BlockDecomposition extract_blocks(const MatrixTuple& herm, double tol = 1e-8);

/// Unitary diagonalizing every member of F, or NotCommutingNormalError with
/// the offending pair when the family is not commuting normal within tol.
CMatrix simultaneous_diagonalize(const MatrixTuple& F, double tol = 1e-8);

/// A cluster of support maximizers whose normal directions have a
/// full-dimensional positive hull.
struct ConicalCertificate {
  RVector point;
  std::vector<RVector> directions;
  int cone_rank = 0;
  CMatrix attaining_unitary;
};

/// Sampling detector for conical points.  Sound but incomplete: every
/// certificate's point is attained by a probe, vertices between samples may
/// be missed.  A cluster is accepted when the scaled direction matrix has at
/// least m singular values above sv_threshold.
std::vector<ConicalCertificate> find_conical(const MatrixTuple& herm, const WeightSpec& C,
                                             int n_dirs, std::uint64_t seed,
                                             double sv_threshold = 0.05);

struct BlockReport {
  bool ok = false;
  int worst_matrix = -1;
  double worst_offblock = 0.0;  // relative off-block mass of the worst member
};

/// Checks that every U*A_jU is block diagonal with the block sizes of C.
BlockReport verify_conical_blocks(const MatrixTuple& t, const WeightSpec& C, const CMatrix& U,
                                  double tol = 1e-8);

/// Convex combination of block-diagonal rank-k projections reconstructing
/// the pinched projection.
struct PinchDecomposition {
  std::vector<double> weights;
  std::vector<CMatrix> projections;
  CMatrix source;  // P_11 (+) P_22 (+) ...
  int rank = 0;
};

/// Blocks are resolved pairwise left to right; two entries give the plain
/// two-block pinching.
PinchDecomposition pinch_decompose(const CMatrix& P, const std::vector<int>& splits);

/// For every direction, the top-k eigenvalue sum of v.A must match the best
/// split of k across the declared diagonal blocks.
bool partition_support_check(const MatrixTuple& t, const std::vector<int>& blocks, int k,
                             const std::vector<RVector>& dirs, double tol = 1e-9);

}  // namespace jnr
