#include "jnr/decide.hpp"

#include <algorithm>
#include <cmath>

namespace jnr {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Polyhedral: return "Polyhedral";
    case Verdict::NotPolyhedral: return "NotPolyhedral";
    case Verdict::CommutingNormal: return "CommutingNormal";
    case Verdict::NotCommutingNormal: return "NotCommutingNormal";
    case Verdict::Singleton: return "Singleton";
    case Verdict::Segment: return "Segment";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(Route r) {
  switch (r) {
    case Route::structural: return "structural";
    case Route::geometric: return "geometric";
    case Route::both: return "both";
  }
  return "?";
}

namespace {

// Top-k sum of the combined diagonal v.D.
double diag_topk_sum(const std::vector<RVector>& D, const RVector& v, int k) {
  const int ell = static_cast<int>(D.empty() ? 0 : D[0].size());
  RVector combined = RVector::Zero(ell);
  for (int j = 0; j < static_cast<int>(D.size()); ++j) combined += v[j] * D[j];
  std::sort(combined.data(), combined.data() + ell, std::greater<double>());
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += combined[i];
  return s;
}

// Weighted sum of the sorted combined diagonal under a general weight.
double diag_weighted_sum(const std::vector<RVector>& D, const RVector& v, const RVector& w) {
  const int ell = static_cast<int>(D.empty() ? 0 : D[0].size());
  RVector combined = RVector::Zero(ell);
  for (int j = 0; j < static_cast<int>(D.size()); ++j) combined += v[j] * D[j];
  std::sort(combined.data(), combined.data() + ell, std::greater<double>());
  double s = 0.0;
  for (int i = 0; i < ell; ++i) s += w[i] * combined[i];
  return s;
}

void fill_params(AnalysisReport& rep, const DecisionParams& p) {
  rep.tol = p.tol;
  rep.n_dirs = p.n_dirs;
  rep.seed = p.seed;
  rep.cone_sv = p.cone_sv;
}

}  // namespace

AnalysisReport decide_polyhedral(const MatrixTuple& t0, const WeightSpec& C,
                                 const DecisionParams& params) {
  const MatrixTuple t = effective_hermitian(t0);
  const int n = t.dim();
  const int m = t.size();
  if (n != C.n) throw DimensionMismatch("decide_polyhedral: weight dimension mismatch");
  const int k = C.gamma;
  if (2 * k > n) throw GammaOutOfRange("decide_polyhedral: gamma exceeds n/2");

  AnalysisReport rep;
  fill_params(rep, params);
  rep.n = n;
  rep.m = m;
  rep.gamma = k;
  rep.k_used = k;

  const auto bd = extract_blocks(t, params.tol);
  rep.ell = bd.ell;
  rep.unitary = bd.U;
  rep.block_diag = bd.D;

  if (bd.ell < 2 * k) {
    rep.verdict = Verdict::NotPolyhedral;
    rep.route = Route::structural;
    rep.note = "common diagonal block is smaller than 2*gamma";
    return rep;
  }

  const auto wk = make_weight(k, n);
  const double scale = std::max(tuple_scale(t, wk), 1e-300);

  if (bd.ell < n) {
    const auto dirs = sample_directions(m, params.n_dirs, params.seed);
    std::vector<RVector> eigvals;  // cached spectra for the certificate rows
    eigvals.reserve(dirs.size());
    for (const auto& v : dirs) {
      CMatrix Mv = CMatrix::Zero(n, n);
      for (int j = 0; j < m; ++j) Mv += v[j] * t.A[j];
      const auto eig = herm_eig(Mv);
      double hA = 0.0;
      for (int i = 0; i < k; ++i) hA += eig.values[i];
      const double hD = diag_topk_sum(bd.D, v, k);
      const double gap = hA - hD;
      if (gap > params.tol * scale) {
        rep.verdict = Verdict::NotPolyhedral;
        rep.route = Route::geometric;
        rep.witness_direction = v;
        rep.witness_gap = gap;
        rep.note = "support gap between the tuple and its diagonal block";
        return rep;
      }
      eigvals.push_back(eig.values);
    }

    rep.verdict = Verdict::Polyhedral;
    rep.route = Route::both;

    // Emit the truncated-weight supports for the requested C: the weight
    // shifted by c_{k+1} on the full tuple against the truncated weight on
    // the diagonal block.
    const double shift = C.c[k];
    rep.c_shift = shift;
    rep.c_hat.resize(bd.ell);
    for (int i = 0; i < k; ++i) rep.c_hat[i] = C.c[i] - shift;
    for (int i = k; i < bd.ell; ++i) rep.c_hat[i] = C.c[i + n - bd.ell] - shift;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      ShiftedSupportRow row;
      row.v = dirs[d];
      row.h_shifted = 0.0;
      for (int i = 0; i < n; ++i) row.h_shifted += (C.c[i] - shift) * eigvals[d][i];
      row.h_hat = diag_weighted_sum(bd.D, dirs[d], rep.c_hat);
      rep.c_hat_discrepancy =
          std::max(rep.c_hat_discrepancy, std::abs(row.h_shifted - row.h_hat));
      rep.c_hat_supports.push_back(std::move(row));
    }
    return rep;
  }

  // Full common eigenbasis: the diagonal block is the whole tuple, so the
  // supports coincide by unitary invariance.
  rep.verdict = Verdict::Polyhedral;
  rep.route = Route::both;
  rep.note = "tuple is simultaneously diagonalized by the certificate basis";
  const double shift = C.c[k];
  rep.c_shift = shift;
  rep.c_hat = C.c - RVector::Constant(n, shift);
  return rep;
}

namespace {

struct PairCheck {
  bool ok = true;
  int u = 0, v = 0;
  double residual = 0.0;
};

PairCheck algebraic_route(const std::vector<CMatrix>& H, const MatrixTuple& basis,
                          double tol) {
  PairCheck out;
  double family_scale = 0.0;
  for (const auto& M : H) family_scale = std::max(family_scale, M.norm());
  const double scale2 = std::max(family_scale * family_scale, 1e-300);
  for (std::size_t u = 0; u < H.size(); ++u) {
    for (std::size_t v = u + 1; v < H.size(); ++v) {
      const double r = commutator_norm(H[u], H[v]) / scale2;
      if (r > out.residual) {
        out.residual = r;
        out.u = static_cast<int>(u);
        out.v = static_cast<int>(v);
      }
    }
  }
  if (out.residual > tol) {
    out.ok = false;
    return out;
  }
  for (int j = 0; j < basis.size(); ++j) {
    if (!is_normal(basis.A[j], tol)) {
      out.ok = false;
      out.u = 2 * j;
      out.v = 2 * j + 1;
      out.residual = commutator_norm(H[2 * j], H[2 * j + 1]) / scale2;
      return out;
    }
  }
  return out;
}

PairCheck geometric_route(const std::vector<CMatrix>& H, int n, int k,
                          const DecisionParams& params) {
  PairCheck out;
  const auto wk = make_weight(k, n);
  for (std::size_t u = 0; u < H.size(); ++u) {
    for (std::size_t v = u + 1; v < H.size(); ++v) {
      MatrixTuple pair(std::vector<CMatrix>{H[u], H[v]});
      const auto rep = decide_polyhedral(pair, wk, params);
      if (rep.verdict != Verdict::Polyhedral) {
        out.ok = false;
        out.u = static_cast<int>(u);
        out.v = static_cast<int>(v);
        out.residual = rep.witness_gap;
        return out;
      }
    }
  }
  return out;
}

}  // namespace

AnalysisReport decide_commuting(const std::vector<CMatrix>& F, CommuteMode mode,
                                const DecisionParams& params) {
  if (F.empty()) throw EmptyFamily("decide_commuting: empty family");
  const int n = static_cast<int>(F[0].rows());

  AnalysisReport rep;
  fill_params(rep, params);
  rep.n = n;

  if (n == 1) {
    rep.verdict = Verdict::CommutingNormal;
    rep.route = Route::both;
    rep.unitary = CMatrix::Identity(1, 1);
    rep.note = "dimension one is trivially commuting normal";
    return rep;
  }

  const MatrixTuple basis = span_basis(F);
  if (basis.size() == 0) {
    rep.verdict = Verdict::CommutingNormal;
    rep.route = Route::both;
    rep.unitary = CMatrix::Identity(n, n);
    rep.note = "family spans only the zero matrix";
    return rep;
  }
  const auto H = hermitian_expand(basis);
  rep.m = static_cast<int>(H.size());

  const int k = params.k.value_or(n / 2);
  if (k < 1 || k > n - 1 || std::abs(n / 2.0 - k) > 1.0)
    throw BadWeight("decide_commuting: k must satisfy |n/2 - k| <= 1");
  rep.k_used = k;
  rep.gamma = make_weight(k, n).gamma;

  PairCheck alg, geo;
  bool have_alg = false, have_geo = false;
  if (mode == CommuteMode::algebraic || mode == CommuteMode::both) {
    alg = algebraic_route(H, basis, params.tol);
    have_alg = true;
  }
  if (mode == CommuteMode::geometric || mode == CommuteMode::both) {
    geo = geometric_route(H, n, k, params);
    have_geo = true;
  }
  if (have_alg && have_geo && alg.ok != geo.ok)
    throw RouteDisagreement("decide_commuting: algebraic and geometric verdicts differ");

  const PairCheck& chosen = have_alg ? alg : geo;
  rep.route = (have_alg && have_geo) ? Route::both
                                     : (have_alg ? Route::structural : Route::geometric);
  if (chosen.ok) {
    rep.verdict = Verdict::CommutingNormal;
    rep.unitary = simultaneous_diagonalize(basis, params.tol);
  } else {
    rep.verdict = Verdict::NotCommutingNormal;
    rep.offending_pair = std::make_pair(chosen.u, chosen.v);
    rep.offending_residual = chosen.residual;
    rep.note = "offending pair indexes the Hermitian expansion of the basis";
  }
  return rep;
}

AnalysisReport decide_via_conical(const MatrixTuple& t0, const WeightSpec& C,
                                  const DecisionParams& params) {
  if (static_cast<int>(C.distinct.size()) != C.n)
    throw BadWeight("decide_via_conical: weight must have n distinct eigenvalues");
  const MatrixTuple t = effective_hermitian(t0);
  if (t.dim() != C.n) throw DimensionMismatch("decide_via_conical: weight dimension mismatch");

  AnalysisReport rep;
  fill_params(rep, params);
  rep.n = t.dim();
  rep.m = t.size();
  rep.gamma = C.gamma;
  rep.k_used = C.gamma;
  rep.route = Route::geometric;

  rep.conical = find_conical(t, C, params.n_dirs, params.seed, params.cone_sv);
  if (rep.conical.empty()) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "no conical point found at this direction resolution";
    return rep;
  }

  const auto& cert = rep.conical.front();
  const auto blocks = verify_conical_blocks(t, C, cert.attaining_unitary, params.tol);
  if (blocks.ok) {
    try {
      rep.unitary = simultaneous_diagonalize(t0, params.tol);
      rep.verdict = Verdict::CommutingNormal;
      return rep;
    } catch (const NotCommutingNormalError&) {
      // fall through to the algebraic rejection below
    }
  }

  const auto H = hermitian_expand(t0);
  PairCheck alg = algebraic_route(H, t0, params.tol);
  if (!alg.ok) {
    rep.verdict = Verdict::NotCommutingNormal;
    rep.route = Route::structural;
    rep.offending_pair = std::make_pair(alg.u, alg.v);
    rep.offending_residual = alg.residual;
    rep.note = "conical certificate did not verify; commutator check rejects the family";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "conical certificate found but block verification failed";
  }
  return rep;
}

AnalysisReport classify_report(const MatrixTuple& t, const WeightSpec& C, double tol) {
  AnalysisReport rep;
  rep.n = t.dim();
  rep.m = t.size();
  rep.tol = tol;
  rep.gamma = C.gamma;
  rep.route = Route::structural;
  const auto flat = classify_flat(t, C, tol);
  switch (flat.kind) {
    case Flatness::Singleton:
      rep.verdict = Verdict::Singleton;
      break;
    case Flatness::Segment:
      rep.verdict = Verdict::Segment;
      break;
    case Flatness::Higher:
      rep.verdict = Verdict::Inconclusive;
      rep.note = "range is neither a point nor a segment";
      break;
  }
  return rep;
}

}  // namespace jnr
