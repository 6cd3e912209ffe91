#include "jnr/family.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "jnr/crange.hpp"

namespace jnr {

MatrixTuple::MatrixTuple(std::vector<CMatrix> a) : A(std::move(a)) {
  for (const auto& M : A) {
    if (M.rows() != M.cols())
      throw DimensionMismatch("MatrixTuple: members must be square");
    if (M.rows() != A[0].rows())
      throw DimensionMismatch("MatrixTuple: members must share one dimension");
  }
}

bool MatrixTuple::all_hermitian(double tol) const {
  for (const auto& M : A)
    if (!is_hermitian(M, tol)) return false;
  return true;
}

std::vector<CMatrix> hermitian_expand(const MatrixTuple& t) {
  std::vector<CMatrix> H;
  H.reserve(2 * t.A.size());
  const Complex half_over_i(0.0, -0.5);  // 1/(2i)
  for (const auto& M : t.A) {
    H.push_back(0.5 * (M + M.adjoint()));
    H.push_back(half_over_i * (M - M.adjoint()));
  }
  return H;
}

MatrixTuple effective_hermitian(const MatrixTuple& t) {
  if (t.all_hermitian()) return t;
  return MatrixTuple(hermitian_expand(t));
}

MatrixTuple span_basis(const std::vector<CMatrix>& F, double tol) {
  if (F.empty()) throw EmptyFamily("span_basis: empty family");
  const Eigen::Index n = F[0].rows();
  for (const auto& M : F)
    if (M.rows() != n || M.cols() != n)
      throw DimensionMismatch("span_basis: members must share one dimension");

  std::vector<CMatrix> basis;
  std::vector<CMatrix> ortho;  // orthonormalized copies used for projection
  for (const auto& M : F) {
    const double norm = M.norm();
    CMatrix r = M;
    for (const auto& b : ortho) {
      const Complex coef = (b.array().conjugate() * r.array()).sum();
      r -= coef * b;
    }
    if (r.norm() > tol * norm) {
      basis.push_back(M);
      ortho.push_back(r / r.norm());
    }
  }
  MatrixTuple out;
  out.A = std::move(basis);
  return out;
}

MatrixTuple apply_affine(const MatrixTuple& t, const AffineMap& map) {
  const int m = t.size();
  if (map.R.rows() != m || map.R.cols() != m || map.f.size() != m)
    throw DimensionMismatch("apply_affine: map size does not match tuple length");
  Eigen::JacobiSVD<CMatrix> svd(map.R);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin == 0.0 || smax / smin > 1e12)
    throw SingularMap("apply_affine: R fails the invertibility estimate");

  const int n = t.dim();
  std::vector<CMatrix> B(m, CMatrix::Zero(n, n));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) B[i] += map.R(i, j) * t.A[j];
    B[i] += map.f[i] * CMatrix::Identity(n, n);
  }
  return MatrixTuple(std::move(B));
}

std::vector<CVector> apply_affine(const std::vector<CVector>& points, const AffineMap& map) {
  std::vector<CVector> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != map.R.cols())
      throw DimensionMismatch("apply_affine: point size does not match map");
    out.push_back(map.R * p + map.f);
  }
  return out;
}

FlatReport classify_flat(const MatrixTuple& t, const WeightSpec& C, double tol) {
  if (C.c.size() < 1 || C.c[0] <= C.c[C.c.size() - 1])
    throw ScalarWeight("classify_flat: weight must be non-scalar");
  const int n = t.dim();
  if (n == 0) throw EmptyFamily("classify_flat: empty tuple");

  bool all_scalar = true;
  for (const auto& M : t.A) {
    const Complex mean = M.trace() / static_cast<double>(n);
    const CMatrix dev = M - mean * CMatrix::Identity(n, n);
    if (dev.norm() > tol * std::max(M.norm(), 1e-300)) {
      all_scalar = false;
      break;
    }
  }
  if (all_scalar) return {Flatness::Singleton, CMatrix()};

  // Traceless Hermitian parts; fix the first non-degenerate direction and
  // require every other part to be a real multiple of it.
  const auto H = hermitian_expand(t);
  std::vector<CMatrix> G;
  G.reserve(H.size());
  for (const auto& M : H) {
    const Complex mean = M.trace() / static_cast<double>(n);
    G.push_back(M - mean * CMatrix::Identity(n, n));
  }

  // A part counts as nonzero relative to the norm of the matrix it came from.
  auto negligible = [&](std::size_t idx) {
    return G[idx].norm() <= tol * std::max(H[idx].norm(), 1e-300);
  };

  CMatrix witness;
  double witness_norm = 0.0;
  for (std::size_t idx = 0; idx < G.size(); ++idx) {
    if (!negligible(idx)) {
      witness = G[idx];
      witness_norm = witness.norm();
      break;
    }
  }
  if (witness_norm == 0.0) return {Flatness::Singleton, CMatrix()};

  for (std::size_t idx = 0; idx < G.size(); ++idx) {
    if (negligible(idx)) continue;
    const CMatrix& g = G[idx];
    const double coef =
        (witness.array().conjugate() * g.array()).sum().real() / (witness_norm * witness_norm);
    if ((g - coef * witness).norm() > tol * g.norm()) return {Flatness::Higher, CMatrix()};
  }
  return {Flatness::Segment, witness};
}

}  // namespace jnr
