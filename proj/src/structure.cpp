#include "jnr/structure.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jnr {

namespace {

constexpr double kClusterGap = 1e-8;  // relative eigenvalue cluster gap

struct Refiner {
  const std::vector<CMatrix>& H;
  const std::vector<double>& norms;
  double tol;
  std::vector<CVector> candidates;

  // B has orthonormal columns spanning the subspace under refinement.
  void refine(const CMatrix& B) {
    const int d = static_cast<int>(B.cols());
    if (d == 0) return;
    for (std::size_t j = 0; j < H.size(); ++j) {
      if (norms[j] == 0.0) continue;
      CMatrix M = B.adjoint() * H[j] * B;
      M = 0.5 * (M + M.adjoint());
      const auto eig = herm_eig(M);
      const double gap_tol = kClusterGap * norms[j];
      std::vector<int> cuts;  // cluster boundaries (exclusive end indices)
      for (int i = 0; i + 1 < d; ++i)
        if (eig.values[i] - eig.values[i + 1] > gap_tol) cuts.push_back(i + 1);
      if (!cuts.empty()) {
        cuts.push_back(d);
        int start = 0;
        for (int end : cuts) {
          refine(B * eig.vectors.middleCols(start, end - start));
          start = end;
        }
        return;
      }
    }

    // Stable subspace: every member acts as an approximate scalar on it, so
    // common eigenvectors are the joint kernel of the invariance residuals
    // H_j B - B (B* H_j B).
    const int n = static_cast<int>(B.rows());
    CMatrix stack(static_cast<Eigen::Index>(H.size()) * n, d);
    for (std::size_t j = 0; j < H.size(); ++j) {
      const CMatrix M = B.adjoint() * H[j] * B;
      CMatrix R = H[j] * B - B * M;
      if (norms[j] > 0.0) R /= norms[j];
      stack.middleRows(static_cast<Eigen::Index>(j) * n, n) = R;
    }
    Eigen::JacobiSVD<CMatrix> svd(stack, Eigen::ComputeFullV);
    const double thresh = std::sqrt(static_cast<double>(H.size())) * tol;
    for (int i = 0; i < d; ++i) {
      if (svd.singularValues()[i] <= thresh) {
        CVector u = B * svd.matrixV().col(i);
        candidates.push_back(u / u.norm());
      }
    }
  }
};

}  // namespace

BlockDecomposition extract_blocks(const MatrixTuple& herm, double tol) {
  const int n = herm.dim();
  const int m = herm.size();
  if (n == 0 || m == 0) throw EmptyFamily("extract_blocks: empty tuple");
  std::vector<CMatrix> H;
  std::vector<double> norms;
  H.reserve(m);
  double family_scale = 0.0;
  for (const auto& M : herm.A) {
    if (!is_hermitian(M)) throw NotHermitian("extract_blocks: tuple member is not Hermitian");
    H.push_back(0.5 * (M + M.adjoint()));
    norms.push_back(H.back().norm());
    family_scale = std::max(family_scale, norms.back());
  }
  // Members negligible at the family scale (rounding debris of Hermitian
  // expansions) impose no constraints.
  std::vector<CMatrix> active;
  std::vector<double> active_norms;
  for (int j = 0; j < m; ++j) {
    if (norms[j] > 1e-12 * family_scale) {
      active.push_back(H[j]);
      active_norms.push_back(norms[j]);
    }
  }

  std::vector<CVector> candidates;
  if (active.empty()) {
    const CMatrix eye = CMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i) candidates.push_back(eye.col(i));
  } else {
    Refiner refiner{active, active_norms, tol, {}};
    refiner.refine(CMatrix::Identity(n, n));
    candidates = std::move(refiner.candidates);
  }

  // Validate candidates against the original matrices.
  std::vector<CVector> accepted;
  for (const auto& u : candidates) {
    bool ok = true;
    for (std::size_t j = 0; j < active.size() && ok; ++j) {
      const double mu = (u.adjoint() * active[j] * u)(0, 0).real();
      if ((active[j] * u - mu * u).norm() > tol * active_norms[j]) ok = false;
    }
    if (ok) accepted.push_back(u);
  }

  BlockDecomposition out;
  out.ell = static_cast<int>(accepted.size());
  CMatrix common(n, out.ell);
  for (int i = 0; i < out.ell; ++i) common.col(i) = accepted[i];

  CMatrix U(n, n);
  if (out.ell == 0) {
    U = CMatrix::Identity(n, n);
  } else if (out.ell == n) {
    U = common;
  } else {
    Eigen::HouseholderQR<CMatrix> qr(common);
    const CMatrix Q = qr.householderQ();
    U.leftCols(out.ell) = common;
    U.rightCols(n - out.ell) = Q.rightCols(n - out.ell);
  }
  out.U = U;
  out.D.assign(m, RVector(out.ell));
  out.Q.assign(m, CMatrix());
  const CMatrix rest = U.rightCols(n - out.ell);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < out.ell; ++i)
      out.D[j][i] = (U.col(i).adjoint() * H[j] * U.col(i))(0, 0).real();
    out.Q[j] = rest.adjoint() * H[j] * rest;
  }
  return out;
}

CMatrix simultaneous_diagonalize(const MatrixTuple& F, double tol) {
  const int n = F.dim();
  if (n == 0 || F.size() == 0) throw EmptyFamily("simultaneous_diagonalize: empty tuple");
  const auto H = hermitian_expand(F);
  double family_scale = 0.0;
  for (const auto& M : H) family_scale = std::max(family_scale, M.norm());
  const double scale2 = std::max(family_scale * family_scale, 1e-300);
  int worst_u = 0, worst_v = 0;
  double worst = 0.0;
  for (std::size_t u = 0; u < H.size(); ++u) {
    for (std::size_t v = u + 1; v < H.size(); ++v) {
      const double r = commutator_norm(H[u], H[v]) / scale2;
      if (r > worst) {
        worst = r;
        worst_u = static_cast<int>(u);
        worst_v = static_cast<int>(v);
      }
    }
  }
  if (worst > tol)
    throw NotCommutingNormalError(
        "simultaneous_diagonalize: Hermitian parts do not commute", worst_u, worst_v, worst);

  const auto bd = extract_blocks(MatrixTuple(H), tol);
  if (bd.ell < n)
    throw NotCommutingNormalError(
        "simultaneous_diagonalize: no full common eigenbasis within tolerance", worst_u,
        worst_v, worst);

  for (int j = 0; j < F.size(); ++j) {
    const CMatrix M = bd.U.adjoint() * F.A[j] * bd.U;
    double off = 0.0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v) off += std::norm(M(u, v));
    if (std::sqrt(off) > tol * std::max(F.A[j].norm(), 1e-300))
      throw NotCommutingNormalError(
          "simultaneous_diagonalize: off-diagonal residual above tolerance", j, j,
          std::sqrt(off));
  }
  return bd.U;
}

std::vector<ConicalCertificate> find_conical(const MatrixTuple& herm, const WeightSpec& C,
                                             int n_dirs, std::uint64_t seed,
                                             double sv_threshold) {
  const int m = herm.size();
  const auto dirs = sample_directions(m, n_dirs, seed);
  const double scale = tuple_scale(herm, C);
  const double radius = 1e-6 * std::max(scale, 1e-300);

  struct Cluster {
    RVector center;
    std::vector<RVector> directions;       // non-degenerate normals
    std::vector<double> support_values;
    CMatrix unitary;                        // first non-degenerate maximizer
    bool has_unitary = false;
  };
  std::vector<Cluster> clusters;
  for (const auto& v : dirs) {
    const auto probe = support(herm, C, v);
    Cluster* hit = nullptr;
    for (auto& cl : clusters) {
      if ((probe.point - cl.center).norm() <= radius) {
        hit = &cl;
        break;
      }
    }
    if (hit == nullptr) {
      clusters.push_back({probe.point, {}, {}, CMatrix(), false});
      hit = &clusters.back();
    }
    if (!probe.degenerate) {
      hit->directions.push_back(probe.v);
      hit->support_values.push_back(probe.h);
      if (!hit->has_unitary) {
        hit->unitary = probe.maximizer;
        hit->has_unitary = true;
      }
    }
  }

  std::vector<ConicalCertificate> certs;
  for (auto& cl : clusters) {
    // Keep only directions whose support the cluster point actually attains.
    std::vector<RVector> keep;
    for (std::size_t i = 0; i < cl.directions.size(); ++i)
      if (cl.directions[i].dot(cl.center) >= cl.support_values[i] - 1e-8 * std::max(scale, 1e-300))
        keep.push_back(cl.directions[i]);
    const int K = static_cast<int>(keep.size());
    if (K < m || !cl.has_unitary) continue;
    RMatrix Dm(m, K);
    for (int i = 0; i < K; ++i) Dm.col(i) = keep[i];
    Dm /= std::sqrt(static_cast<double>(K));
    Eigen::JacobiSVD<RMatrix> svd(Dm);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] >= sv_threshold) ++rank;
    if (rank == m) {
      ConicalCertificate cert;
      cert.point = cl.center;
      cert.directions = std::move(keep);
      cert.cone_rank = rank;
      cert.attaining_unitary = cl.unitary;
      certs.push_back(std::move(cert));
    }
  }
  return certs;
}

namespace {

double offblock_mass(const CMatrix& M, const std::vector<int>& blocks) {
  std::vector<int> owner(M.rows());
  int start = 0, id = 0;
  for (int b : blocks) {
    for (int i = 0; i < b; ++i) owner[start + i] = id;
    start += b;
    ++id;
  }
  double s = 0.0;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (owner[i] != owner[j]) s += std::norm(M(i, j));
  return std::sqrt(s);
}

}  // namespace

BlockReport verify_conical_blocks(const MatrixTuple& t, const WeightSpec& C, const CMatrix& U,
                                  double tol) {
  const int n = t.dim();
  std::vector<int> blocks;
  int total = 0;
  for (const auto& [xi, cnt] : C.distinct) {
    blocks.push_back(cnt);
    total += cnt;
  }
  if (total != n) throw BadBlockSpec("verify_conical_blocks: block sizes do not sum to n");
  if (unitary_defect(U) > 1e-8)
    throw NotUnitary("verify_conical_blocks: U fails the unitarity check");

  BlockReport rep;
  rep.ok = true;
  for (int j = 0; j < t.size(); ++j) {
    const CMatrix M = U.adjoint() * t.A[j] * U;
    const double off = offblock_mass(M, blocks) / std::max(t.A[j].norm(), 1e-300);
    if (off > rep.worst_offblock) {
      rep.worst_offblock = off;
      rep.worst_matrix = j;
    }
    if (off > tol) rep.ok = false;
  }
  return rep;
}

namespace {

// Nudges the final weight of a nonnegative convex-combination vector so that
// the left-to-right floating sum is exactly one.
void normalize_unit_sum(std::vector<double>& w) {
  for (int last = static_cast<int>(w.size()) - 1; last >= 0; --last) {
    double prefix = 0.0;
    for (int i = 0; i < last; ++i) prefix += w[i];
    const double fix = 1.0 - prefix;
    if (fix >= 0.0) {
      w[last] = fix;
      return;
    }
    w[last] = 0.0;  // true trailing mass is below rounding at this point
  }
}

// One pinching step for a two-block split.  Trailing/leading unit weights are
// trimmed so an already block-diagonal projection yields a single term.
void pinch_two(const CMatrix& P, int n1, int n2, int k,
               std::vector<std::pair<double, CMatrix>>& terms) {
  const int n = n1 + n2;
  const CMatrix P11 = P.topLeftCorner(n1, n1);
  const CMatrix P22 = P.bottomRightCorner(n2, n2);
  const auto e1 = herm_eig(P11);
  const auto e2 = herm_eig(P22);

  auto snap = [](double x) {
    if (std::abs(x) <= 1e-9) return 0.0;
    if (std::abs(x - 1.0) <= 1e-9) return 1.0;
    return x;
  };
  std::vector<double> d(n1);
  for (int i = 0; i < n1; ++i) d[i] = snap(e1.values[i]);

  // d_i = 1 below the window and d_i = 0 above it, by convention and in fact.
  auto dval = [&](int i) {  // 1-based
    if (i < 1) return 1.0;
    if (i > n1) return 0.0;
    return d[i - 1];
  };
  const int p = std::max(0, k - n2);
  const int q = std::min(k, n1);
  for (int i = 1; i <= p; ++i)
    if (dval(i) != 1.0)
      throw SpectrumMismatch("pinch_decompose: leading eigenvalue of P11 is not 1");
  for (int i = q + 1; i <= n1; ++i)
    if (dval(i) != 0.0)
      throw SpectrumMismatch("pinch_decompose: trailing eigenvalue of P11 is not 0");

  // P22 spectrum must pair as 1 - d over the window, descending.
  for (int i = 0; i < n2; ++i) {
    const double expected = 1.0 - dval(k - i);
    if (std::abs(snap(e2.values[i]) - expected) > 1e-8)
      throw SpectrumMismatch("pinch_decompose: P11/P22 spectra do not pair");
  }

  int p_eff = p;
  while (p_eff < q && dval(p_eff + 1) == 1.0) ++p_eff;
  int q_eff = q;
  while (q_eff > p_eff && dval(q_eff) == 0.0) --q_eff;

  const CMatrix& V1 = e1.vectors;
  const CMatrix& V2 = e2.vectors;
  std::vector<double> weights;
  std::vector<CMatrix> projections;
  for (int l = p_eff; l <= q_eff; ++l) {
    weights.push_back(dval(l) - dval(l + 1));
    CMatrix T = CMatrix::Zero(n, n);
    for (int i = 0; i < l; ++i) T(i, i) = 1.0;
    for (int i = 0; i < k - l; ++i) T(n1 + i, n1 + i) = 1.0;
    CMatrix V = CMatrix::Zero(n, n);
    V.topLeftCorner(n1, n1) = V1;
    V.bottomRightCorner(n2, n2) = V2;
    projections.push_back(V * T * V.adjoint());
  }

  normalize_unit_sum(weights);
  for (std::size_t i = 0; i < weights.size(); ++i)
    terms.emplace_back(weights[i], projections[i]);
}

}  // namespace

PinchDecomposition pinch_decompose(const CMatrix& P, const std::vector<int>& splits) {
  const int n = static_cast<int>(P.rows());
  if (splits.size() < 2) throw BadBlockSpec("pinch_decompose: need at least two blocks");
  int total = 0;
  for (int b : splits) {
    if (b < 1) throw BadBlockSpec("pinch_decompose: blocks must be positive");
    total += b;
  }
  if (total != n) throw BadBlockSpec("pinch_decompose: blocks do not sum to n");
  if (!is_hermitian(P, 1e-9)) throw NotProjection("pinch_decompose: P is not Hermitian");
  if ((P * P - P).norm() > 1e-9 * std::max(1.0, P.norm()))
    throw NotProjection("pinch_decompose: P is not idempotent");
  const int k = static_cast<int>(std::lround(P.trace().real()));

  // Resolve splits left to right: (B1 (+) ... (+) B_{r-1}) against B_r, then
  // recurse into the left group of every emitted projection.
  struct Term {
    double w;
    CMatrix Q;
  };
  std::vector<Term> current{{1.0, 0.5 * (P + P.adjoint())}};
  CMatrix source = current[0].Q;

  // Process from the last block inward; after each stage the trailing block
  // of every emitted projection is resolved and only the leading corner is
  // pinched further.
  for (int idx = static_cast<int>(splits.size()) - 1; idx >= 1; --idx) {
    int left_size = 0;
    for (int i = 0; i < idx; ++i) left_size += splits[i];
    const int right_size = splits[idx];
    const int sub = left_size + right_size;

    std::vector<Term> next;
    for (const auto& term : current) {
      const CMatrix Psub = term.Q.topLeftCorner(sub, sub);
      const int ksub = static_cast<int>(std::lround(Psub.trace().real()));
      std::vector<std::pair<double, CMatrix>> pieces;
      pinch_two(Psub, left_size, right_size, ksub, pieces);
      for (auto& [w, Qsub] : pieces) {
        CMatrix Q = term.Q;
        Q.topLeftCorner(sub, sub) = Qsub;
        next.push_back({term.w * w, std::move(Q)});
      }
    }
    current = std::move(next);

    source.block(0, left_size, left_size, right_size).setZero();
    source.block(left_size, 0, right_size, left_size).setZero();
  }

  PinchDecomposition out;
  out.rank = k;
  out.source = std::move(source);
  for (auto& term : current) {
    out.weights.push_back(term.w);
    out.projections.push_back(std::move(term.Q));
  }
  normalize_unit_sum(out.weights);
  return out;
}

bool partition_support_check(const MatrixTuple& t, const std::vector<int>& blocks, int k,
                             const std::vector<RVector>& dirs, double tol) {
  const int n = t.dim();
  const int m = t.size();
  int total = 0;
  for (int b : blocks) {
    if (b < 1) throw BadBlockSpec("partition_support_check: blocks must be positive");
    total += b;
  }
  if (total != n) throw BadBlockSpec("partition_support_check: blocks do not sum to n");
  if (k < 0 || k > n) throw BadWeight("partition_support_check: k out of range");
  for (const auto& M : t.A) {
    if (!is_hermitian(M))
      throw NotHermitian("partition_support_check: tuple member is not Hermitian");
    if (offblock_mass(M, blocks) > 1e-8 * std::max(M.norm(), 1e-300))
      throw BadBlockSpec("partition_support_check: tuple is not block diagonal as declared");
  }
  if (k == 0) return true;
  const auto wk = make_weight(k, n);
  const double scale = tuple_scale(t, wk);

  for (const auto& v : dirs) {
    CMatrix Mv = CMatrix::Zero(n, n);
    for (int j = 0; j < m; ++j) Mv += v[j] * t.A[j];

    const auto eig = herm_eig(Mv);
    double lhs = 0.0;
    for (int i = 0; i < k; ++i) lhs += eig.values[i];

    // Best split of k across blocks, from per-block top sums.
    std::vector<std::vector<double>> prefix;  // prefix[b][j] = top-j sum of block b
    int start = 0;
    for (int b : blocks) {
      const auto be = herm_eig(Mv.block(start, start, b, b));
      std::vector<double> ps(b + 1, 0.0);
      for (int j = 0; j < b; ++j) ps[j + 1] = ps[j] + be.values[j];
      prefix.push_back(std::move(ps));
      start += b;
    }
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> best(k + 1, neg_inf);
    best[0] = 0.0;
    for (const auto& ps : prefix) {
      std::vector<double> nxt(k + 1, neg_inf);
      for (int used = 0; used <= k; ++used) {
        if (best[used] == neg_inf) continue;
        for (int take = 0; take < static_cast<int>(ps.size()) && used + take <= k; ++take)
          nxt[used + take] = std::max(nxt[used + take], best[used] + ps[take]);
      }
      best = std::move(nxt);
    }
    if (std::abs(lhs - best[k]) > tol * std::max(scale, 1e-300)) return false;
  }
  return true;
}

}  // namespace jnr
