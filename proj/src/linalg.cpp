#include "jnr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace jnr {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on two fresh uniforms; u1 is kept away from zero.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

bool is_hermitian(const CMatrix& A, double tol) {
  if (A.rows() != A.cols()) return false;
  double scale = A.norm();
  if (scale == 0.0) return true;
  return (A - A.adjoint()).norm() <= tol * scale;
}

namespace {

double offdiag_norm(const CMatrix& M) {
  double s = 0.0;
  for (Eigen::Index p = 0; p < M.rows(); ++p)
    for (Eigen::Index q = 0; q < M.cols(); ++q)
      if (p != q) s += std::norm(M(p, q));
  return std::sqrt(s);
}

}  // namespace

HermitianEig herm_eig(const CMatrix& A) {
  const Eigen::Index n = A.rows();
  if (n != A.cols()) throw DimensionMismatch("herm_eig: matrix is not square");
  const double input_norm = A.norm();
  if (input_norm > 0.0 && (A - A.adjoint()).norm() > kHermTol * input_norm)
    throw NotHermitian("herm_eig: input is not Hermitian within tolerance");

  // Work on the Hermitized copy so rounding in the input cannot bias sweeps.
  CMatrix M = 0.5 * (A + A.adjoint());
  CMatrix V = CMatrix::Identity(n, n);
  const double target = kEigTol * input_norm;

  int sweep = 0;
  while (offdiag_norm(M) > target) {
    if (sweep++ >= kMaxSweeps)
      throw NoConvergence("herm_eig: sweep limit exceeded");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(M(p, q));
        if (r == 0.0) continue;
        const Complex phase = M(p, q) / r;
        const double app = M(p, p).real();
        const double aqq = M(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex spq = s * phase;        // rotation entry (p,q)
        const Complex sqp = -s * std::conj(phase);

        // M <- G* M G with G = [[c, spq], [sqp, c]] acting on columns p,q.
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex mp = M(i, p);
          const Complex mq = M(i, q);
          M(i, p) = c * mp + sqp * mq;
          M(i, q) = spq * mp + c * mq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex mp = M(p, i);
          const Complex mq = M(q, i);
          M(p, i) = c * mp + std::conj(sqp) * mq;
          M(q, i) = std::conj(spq) * mp + c * mq;
        }
        M(p, q) = Complex(0, 0);
        M(q, p) = Complex(0, 0);
        M(p, p) = Complex(M(p, p).real(), 0);
        M(q, q) = Complex(M(q, q).real(), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex vp = V(i, p);
          const Complex vq = V(i, q);
          V(i, p) = c * vp + sqp * vq;
          V(i, q) = spq * vp + c * vq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return M(a, a).real() > M(b, b).real();
  });

  HermitianEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values[j] = M(order[j], order[j]).real();
    out.vectors.col(j) = V.col(order[j]);
  }
  return out;
}

double commutator_norm(const CMatrix& X, const CMatrix& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols() || X.rows() != X.cols())
    throw DimensionMismatch("commutator_norm: dimensions disagree");
  return (X * Y - Y * X).norm();
}

bool is_normal(const CMatrix& A, double tol) {
  if (A.rows() != A.cols()) throw DimensionMismatch("is_normal: matrix is not square");
  const double scale = A.squaredNorm();
  if (scale == 0.0) return true;
  return (A * A.adjoint() - A.adjoint() * A).norm() <= tol * scale;
}

double unitary_defect(const CMatrix& U) {
  return (U.adjoint() * U - CMatrix::Identity(U.cols(), U.cols())).norm();
}

CMatrix random_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionMismatch("random_unitary: n must be positive");
  Rng rng(seed);
  CMatrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(G);
  CMatrix Q = qr.householderQ();
  CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = R(j, j);
    const double a = std::abs(d);
    Q.col(j) *= (a > 0.0) ? d / a : Complex(1, 0);
  }
  return Q;
}

}  // namespace jnr
