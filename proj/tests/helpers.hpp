#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "jnr/crange.hpp"
#include "jnr/family.hpp"
#include "jnr/linalg.hpp"
#include "jnr/types.hpp"

namespace jnr::testing {

inline CMatrix random_hermitian(int n, Rng& rng) {
  CMatrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.complex_normal();
  return 0.5 * (G + G.adjoint());
}

inline CMatrix random_complex(int n, Rng& rng) {
  CMatrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.complex_normal();
  return G;
}

inline MatrixTuple random_hermitian_tuple(int n, int m, Rng& rng) {
  std::vector<CMatrix> mats;
  for (int j = 0; j < m; ++j) mats.push_back(random_hermitian(n, rng));
  return MatrixTuple(std::move(mats));
}

inline MatrixTuple random_diagonal_tuple(int n, int m, Rng& rng) {
  std::vector<CMatrix> mats;
  for (int j = 0; j < m; ++j) {
    CMatrix D = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = rng.uniform(-2.0, 2.0);
    mats.push_back(std::move(D));
  }
  return MatrixTuple(std::move(mats));
}

/// Commuting normal family V diag_j V* with a shared random unitary.
inline std::vector<CMatrix> random_commuting_family(int n, int m, Rng& rng,
                                                    std::uint64_t useed) {
  const CMatrix V = random_unitary(n, useed);
  std::vector<CMatrix> mats;
  for (int j = 0; j < m; ++j) {
    CMatrix D = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = rng.complex_normal();
    mats.push_back(V * D * V.adjoint());
  }
  return mats;
}

/// Independent permutation oracle: max over all n! permutation points of v.p
/// for a diagonal tuple, written directly against std::next_permutation.
inline double permutation_support_oracle(const MatrixTuple& D, const WeightSpec& C,
                                         const RVector& v) {
  const int n = D.dim();
  const int m = D.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double val = 0.0;
    for (int j = 0; j < m; ++j) {
      double pj = 0.0;
      for (int u = 0; u < n; ++u) pj += C.c[u] * D.A[j](perm[u], perm[u]).real();
      val += v[j] * pj;
    }
    best = std::max(best, val);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline RVector random_direction(int m, Rng& rng) {
  RVector v(m);
  for (int i = 0; i < m; ++i) v[i] = rng.normal();
  const double norm = v.norm();
  return norm > 1e-12 ? RVector(v / norm) : random_direction(m, rng);
}

/// Random weight with gamma exactly g: strictly descending head and tail of
/// length g around a constant middle.
inline WeightSpec random_weight_with_gamma(int n, int g, Rng& rng) {
  RVector c(n);
  const double mid = rng.uniform(-1.0, 1.0);
  double top = mid;
  for (int i = g - 1; i >= 0; --i) {
    top += rng.uniform(0.1, 1.0);
    c[i] = top;
  }
  for (int i = g; i < n - g; ++i) c[i] = mid;
  double bot = mid;
  for (int i = n - g; i < n; ++i) {
    bot -= rng.uniform(0.1, 1.0);
    c[i] = bot;
  }
  return make_weight(std::move(c));
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool point_near(const RVector& a, const RVector& b, double tol) {
  return (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

/// Matches hull vertices against expected points regardless of order.
inline bool hull_matches(const std::vector<Eigen::Vector2d>& hull,
                         const std::vector<Eigen::Vector2d>& expected, double tol) {
  if (hull.size() != expected.size()) return false;
  std::vector<bool> used(expected.size(), false);
  for (const auto& h : hull) {
    bool found = false;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (!used[i] && (h - expected[i]).norm() <= tol) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace jnr::testing
