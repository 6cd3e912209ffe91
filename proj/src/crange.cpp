#include "jnr/crange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jnr {

CMatrix WeightSpec::matrix() const {
  CMatrix M = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) M(i, i) = c[i];
  return M;
}

int weight_gamma(const RVector& c) {
  const int n = static_cast<int>(c.size());
  const double half = n / 2.0;
  int g = 0;
  for (int j = 1; j < n; ++j) {  // 1-based descent index
    if (c[j - 1] > c[j]) {
      if (j <= half) g = std::max(g, j);
      if (n - j <= half) g = std::max(g, n - j);
    }
  }
  return g;
}

namespace {

WeightSpec finalize_weight(RVector c, int krange) {
  WeightSpec w;
  w.n = static_cast<int>(c.size());
  if (w.n < 1) throw BadWeight("weight vector must be non-empty");
  std::sort(c.data(), c.data() + c.size(), std::greater<double>());
  if (!(c[0] > c[w.n - 1]))
    throw ScalarWeight("weight has equal extreme entries; the range is a single point");
  w.c = std::move(c);
  int start = 0;
  for (int i = 1; i <= w.n; ++i) {
    if (i == w.n || w.c[i] != w.c[start]) {
      w.distinct.emplace_back(w.c[start], i - start);
      if (i < w.n) w.breakpoints.push_back(i);  // 1-based index with c_i > c_{i+1}
      start = i;
    }
  }
  w.gamma = weight_gamma(w.c);
  w.krange = krange;
  return w;
}

}  // namespace

WeightSpec make_weight(int k, int n) {
  if (n < 2) throw BadWeight("k-range weight needs n >= 2");
  if (k < 1 || k > n - 1) throw BadWeight("k-range weight needs 1 <= k <= n-1");
  RVector c = RVector::Zero(n);
  c.head(k).setOnes();
  return finalize_weight(std::move(c), k);
}

WeightSpec make_weight(RVector c) { return finalize_weight(std::move(c), 0); }

double tuple_scale(const MatrixTuple& t, const WeightSpec& C) {
  double worst = 0.0;
  for (const auto& M : t.A) worst = std::max(worst, M.norm());
  return worst * C.c.cwiseAbs().sum();
}

SupportProbe support(const MatrixTuple& t, const WeightSpec& C, const RVector& v) {
  const int m = t.size();
  const int n = t.dim();
  if (v.size() != m) throw DimensionMismatch("support: direction length != tuple length");
  if (n != C.n) throw DimensionMismatch("support: weight dimension != tuple dimension");
  if (std::abs(v.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("support: direction must be a unit vector");
  for (const auto& M : t.A)
    if (!is_hermitian(M)) throw NotHermitian("support: tuple member is not Hermitian");

  CMatrix Mv = CMatrix::Zero(n, n);
  for (int j = 0; j < m; ++j) Mv += v[j] * t.A[j];
  const auto eig = herm_eig(Mv);

  SupportProbe probe;
  probe.v = v;
  probe.h = C.c.dot(eig.values);
  probe.maximizer = eig.vectors;
  probe.point.resize(m);
  for (int j = 0; j < m; ++j) {
    const CMatrix rotated = eig.vectors.adjoint() * t.A[j] * eig.vectors;
    double p = 0.0;
    for (int u = 0; u < n; ++u) p += C.c[u] * rotated(u, u).real();
    probe.point[j] = p;
  }
  const double gap_floor = 1e-10 * std::max(1.0, Mv.norm());
  for (int bp : C.breakpoints) {
    const double gap = eig.values[bp - 1] - eig.values[bp];
    probe.gaps.push_back(gap);
    if (gap <= gap_floor) probe.degenerate = true;
  }
  return probe;
}

CVector point_at(const MatrixTuple& t, const WeightSpec& C, const CMatrix& U) {
  const int n = t.dim();
  if (U.rows() != n || U.cols() != n)
    throw DimensionMismatch("point_at: unitary dimension != tuple dimension");
  if (n != C.n) throw DimensionMismatch("point_at: weight dimension != tuple dimension");
  if (unitary_defect(U) > 1e-8) throw NotUnitary("point_at: U fails the unitarity check");
  CVector p(t.size());
  for (int j = 0; j < t.size(); ++j) {
    const CMatrix rotated = U.adjoint() * t.A[j] * U;
    Complex s(0, 0);
    for (int u = 0; u < n; ++u) s += C.c[u] * rotated(u, u);
    p[j] = s;
  }
  return p;
}

Boundary2D boundary2d(const CMatrix& X, const CMatrix& Y, const WeightSpec& C, int n_dirs) {
  if (n_dirs < 8) throw std::invalid_argument("boundary2d: n_dirs must be at least 8");
  MatrixTuple t(std::vector<CMatrix>{X, Y});
  Boundary2D out;
  out.thetas.reserve(n_dirs);
  out.outer.reserve(n_dirs);
  out.inner.reserve(n_dirs);
  for (int i = 0; i < n_dirs; ++i) {
    const double theta = 2.0 * M_PI * i / n_dirs;
    RVector v(2);
    v << std::cos(theta), std::sin(theta);
    v /= v.norm();
    const auto probe = support(t, C, v);
    out.thetas.push_back(theta);
    out.outer.push_back({probe.v, probe.h});
    out.inner.emplace_back(probe.point[0], probe.point[1]);
  }
  return out;
}

std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts, double rel_tol) {
  if (pts.empty()) return {};
  double diam = 0.0;
  for (const auto& p : pts) diam = std::max(diam, p.cwiseAbs().maxCoeff());
  const double tol_pt = rel_tol * std::max(diam, 1e-300);

  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Eigen::Vector2d> uniq;
  for (const auto& p : pts) {
    if (uniq.empty() || (p - uniq.back()).lpNorm<Eigen::Infinity>() > tol_pt)
      uniq.push_back(p);
  }
  if (uniq.size() <= 2) return uniq;

  const double tol_cross = tol_pt * std::max(diam, 1e-300);
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };

  std::vector<Eigen::Vector2d> hull(2 * uniq.size());
  std::size_t k = 0;
  for (const auto& p : uniq) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= tol_cross) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = uniq.rbegin() + 1; it != uniq.rend(); ++it) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= tol_cross) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

bool wk_complement_check(const MatrixTuple& t, int k, const std::vector<RVector>& dirs,
                         double tol) {
  const int n = t.dim();
  if (k < 1 || k > n - 1) throw BadWeight("wk_complement_check: need 1 <= k <= n-1");
  const auto wk = make_weight(k, n);
  const auto wnk = make_weight(n - k, n);
  const double scale = tuple_scale(t, wk);
  RVector traces(t.size());
  for (int j = 0; j < t.size(); ++j) traces[j] = t.A[j].trace().real();
  for (const auto& v : dirs) {
    const double lhs = support(t, wk, v).h;
    const RVector neg = -v;
    const double rhs = v.dot(traces) + support(t, wnk, neg).h;
    if (std::abs(lhs - rhs) > tol * std::max(scale, 1e-300)) return false;
  }
  return true;
}

std::vector<RVector> diagonal_vertices(const MatrixTuple& D, const WeightSpec& C) {
  const int n = D.dim();
  const int m = D.size();
  if (n > 8) throw TooLarge("diagonal_vertices: n > 8");
  if (n != C.n) throw DimensionMismatch("diagonal_vertices: weight dimension mismatch");
  std::vector<RVector> diag(m, RVector(n));
  for (int j = 0; j < m; ++j) {
    const auto& M = D.A[j];
    double off = 0.0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v) off += std::norm(M(u, v));
    if (std::sqrt(off) > 1e-12 * std::max(M.norm(), 1e-300))
      throw std::invalid_argument("diagonal_vertices: member is not diagonal");
    for (int u = 0; u < n; ++u) {
      if (std::abs(M(u, u).imag()) > 1e-12 * std::max(M.norm(), 1e-300))
        throw NotHermitian("diagonal_vertices: member has complex diagonal");
      diag[j][u] = M(u, u).real();
    }
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<RVector> points;
  do {
    RVector p(m);
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int u = 0; u < n; ++u) s += C.c[u] * diag[j][perm[u]];
      p[j] = s;
    }
    points.push_back(std::move(p));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::sort(points.begin(), points.end(), [](const RVector& a, const RVector& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  });
  std::vector<RVector> uniq;
  for (const auto& p : points) {
    if (uniq.empty() || (p - uniq.back()).lpNorm<Eigen::Infinity>() > 1e-10)
      uniq.push_back(p);
  }
  return uniq;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<RVector> sample_directions(int m, int n_dirs, std::uint64_t seed) {
  std::vector<RVector> dirs;
  if (m < 1) throw DimensionMismatch("sample_directions: m must be positive");
  if (m == 1) {
    RVector plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    dirs.push_back(plus);
    dirs.push_back(minus);
    return dirs;
  }
  if (m == 2) {
    dirs.reserve(n_dirs);
    for (int i = 0; i < n_dirs; ++i) {
      const double theta = 2.0 * M_PI * i / n_dirs;
      RVector v(2);
      v << std::cos(theta), std::sin(theta);
      dirs.push_back(v / v.norm());
    }
    return dirs;
  }

  // Kronecker lattice in [0,1)^d with a seed-derived shift, mapped through
  // Box-Muller pairs; d is even so every coordinate has a partner.
  static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const int d = m + (m % 2);
  std::vector<double> alpha(d), shift(d);
  std::uint64_t state = seed ^ 0x6A09E667F3BCC909ULL;
  for (int j = 0; j < d; ++j) {
    double a = std::sqrt(primes[j % 12]);
    alpha[j] = a - std::floor(a);
    shift[j] = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  }
  for (int i = 0; i < n_dirs; ++i) {
    RVector z(m);
    for (int j = 0; j + 1 < d; j += 2) {
      double u1 = std::fmod((i + 1) * alpha[j] + shift[j], 1.0);
      double u2 = std::fmod((i + 1) * alpha[j + 1] + shift[j + 1], 1.0);
      u1 = std::max(u1, 1e-16);
      const double r = std::sqrt(-2.0 * std::log(u1));
      if (j < m) z[j] = r * std::cos(2.0 * M_PI * u2);
      if (j + 1 < m) z[j + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    const double norm = z.norm();
    if (norm > 1e-12) dirs.push_back(z / norm);
  }
  for (int j = 0; j < m; ++j) {  // axis directions
    RVector v = RVector::Zero(m);
    v[j] = 1.0;
    dirs.push_back(v);
    v[j] = -1.0;
    dirs.push_back(v);
  }
  if (m <= 10) {  // normalized sign vectors
    const double inv = 1.0 / std::sqrt(static_cast<double>(m));
    for (int mask = 0; mask < (1 << m); ++mask) {
      RVector v(m);
      for (int j = 0; j < m; ++j) v[j] = (mask >> j) & 1 ? inv : -inv;
      dirs.push_back(v);
    }
  }
  return dirs;
}

}  // namespace jnr
