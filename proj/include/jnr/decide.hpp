#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jnr/crange.hpp"
#include "jnr/family.hpp"
#include "jnr/structure.hpp"
#include "jnr/types.hpp"

namespace jnr {

enum class Verdict {
  Polyhedral,
  NotPolyhedral,
  CommutingNormal,
  NotCommutingNormal,
  Singleton,
  Segment,
  Inconclusive,
};

enum class Route { structural, geometric, both };

const char* to_string(Verdict v);
const char* to_string(Route r);

struct DecisionParams {
  int n_dirs = 720;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::optional<int> k;     // commutation test index; defaults to floor(n/2)
  double cone_sv = 0.05;    // conical acceptance threshold
};

/// One support comparison row emitted with a Polyhedral certificate: the
/// shifted weight on the full tuple against the truncated weight on the
/// diagonal block.
struct ShiftedSupportRow {
  RVector v;
  double h_shifted = 0.0;
  double h_hat = 0.0;
};

struct AnalysisReport {
  Verdict verdict = Verdict::Inconclusive;
  Route route = Route::structural;

  int n = 0;
  int m = 0;                  // effective Hermitian tuple length
  int gamma = 0;
  int k_used = 0;
  int ell = -1;

  std::optional<CMatrix> unitary;           // diagonalizer or block basis
  std::vector<RVector> block_diag;          // diagonal part of the certificate
  std::optional<RVector> witness_direction; // support gap witness
  double witness_gap = 0.0;
  std::optional<std::pair<int, int>> offending_pair;
  double offending_residual = 0.0;
  std::vector<ConicalCertificate> conical;

  RVector c_hat;                            // truncated weight on the D block
  double c_shift = 0.0;
  std::vector<ShiftedSupportRow> c_hat_supports;
  double c_hat_discrepancy = 0.0;

  double tol = 1e-8;
  int n_dirs = 720;
  std::uint64_t seed = 0;
  double cone_sv = 0.05;
  std::string note;
};

/// Polyhedrality of the joint range for the given weight: the tuple must
/// decompose as D (+) Q with a common diagonal block of size >= 2*gamma(C)
/// whose k-range supports match the full tuple's.
AnalysisReport decide_polyhedral(const MatrixTuple& t, const WeightSpec& C,
                                 const DecisionParams& params = {});

enum class CommuteMode { algebraic, geometric, both };

/// Commuting-normality of a finite family, by pairwise commutators of the
/// Hermitian expansion (algebraic) or pairwise range polyhedrality
/// (geometric).  Mode both cross-validates and throws RouteDisagreement on
/// any mismatch.
AnalysisReport decide_commuting(const std::vector<CMatrix>& F, CommuteMode mode,
                                const DecisionParams& params = {});

/// One-directional conical-point criterion for weights with n distinct
/// eigenvalues: a verified conical point certifies commuting normality,
/// absence of one decides nothing.
AnalysisReport decide_via_conical(const MatrixTuple& t, const WeightSpec& C,
                                  const DecisionParams& params = {});

/// Singleton/segment classification wrapped as a report.
AnalysisReport classify_report(const MatrixTuple& t, const WeightSpec& C, double tol = 1e-9);

}  // namespace jnr
