#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>

#include "helpers.hpp"
#include "jnr/crange.hpp"
#include "jnr/family.hpp"
#include "jnr/io.hpp"

using namespace jnr;
using namespace jnr::testing;

namespace {

// Independent rank oracle: singular values of the vectorized stack.
int vectorized_rank(const std::vector<CMatrix>& F, double tol) {
  const Eigen::Index n2 = F[0].size();
  CMatrix stack(n2, static_cast<Eigen::Index>(F.size()));
  for (std::size_t j = 0; j < F.size(); ++j)
    stack.col(j) = Eigen::Map<const CVector>(F[j].data(), n2);
  Eigen::JacobiSVD<CMatrix> svd(stack);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol * svd.singularValues()[0]) ++rank;
  return rank;
}

}  // namespace

TEST_CASE("hermitian_expand of the first demo matrix") {
  const auto p = demo_problem("ex3.1");
  const auto H = hermitian_expand(p.tuple);
  REQUIRE(H.size() == 2);
  const double s3h = std::sqrt(3.0) / 2.0;

  CMatrix H1 = CMatrix::Zero(5, 5);
  H1(0, 0) = 1;
  H1(1, 1) = -0.5;
  H1(2, 2) = -0.5;
  H1(3, 4) = 0.05;
  H1(4, 3) = 0.05;
  CHECK((H[0] - H1).norm() == 0.0);

  CMatrix H2 = CMatrix::Zero(5, 5);
  H2(1, 1) = s3h;
  H2(2, 2) = -s3h;
  H2(3, 4) = Complex(0, -0.05);
  H2(4, 3) = Complex(0, 0.05);
  CHECK((H[1] - H2).norm() == 0.0);
}

TEST_CASE("hermitian_expand of Hermitian and skew inputs") {
  Rng rng(2);
  const CMatrix X = random_hermitian(4, rng);
  const auto hx = hermitian_expand(MatrixTuple({X}));
  CHECK((hx[0] - X).norm() <= 1e-16 * X.norm());
  CHECK(hx[1].norm() <= 1e-16 * X.norm());

  const CMatrix iX = Complex(0, 1) * X;
  const auto hix = hermitian_expand(MatrixTuple({iX}));
  CHECK(hix[0].norm() <= 1e-16 * X.norm());
  CHECK((hix[1] - X).norm() <= 1e-16 * X.norm());
}

TEST_CASE("hermitian_expand reconstruction") {
  Rng rng(5);
  // Dyadic entries make the means exact; the identity holds bitwise.
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.uniform_int(1, 6);
    CMatrix A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        A(i, j) = Complex(rng.uniform_int(-64, 64) / 32.0, rng.uniform_int(-64, 64) / 32.0);
    const auto H = hermitian_expand(MatrixTuple({A}));
    CHECK((H[0] + Complex(0, 1) * H[1] - A).norm() == 0.0);
    CHECK(is_hermitian(H[0], 1e-15));
    CHECK(is_hermitian(H[1], 1e-15));
  }
  // On general input the identity holds to one rounding of the entries.
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.uniform_int(1, 6);
    const CMatrix A = random_complex(n, rng);
    const auto H = hermitian_expand(MatrixTuple({A}));
    CHECK((H[0] + Complex(0, 1) * H[1] - A).norm() <= 4e-16 * A.norm());
  }
}

TEST_CASE("span_basis sizes") {
  const CMatrix I2 = CMatrix::Identity(2, 2);
  CMatrix E = CMatrix::Zero(2, 2);
  E(0, 0) = 1;
  const auto b1 = span_basis({I2, 2.0 * I2, I2 + E});
  CHECK(b1.size() == 2);

  const auto p = demo_problem("ex5.2");
  CHECK(vectorized_rank(p.tuple.A, 1e-9) == 3);
  CHECK(span_basis(p.tuple.A).size() == 3);

  Rng rng(9);
  const CMatrix X = random_complex(3, rng);
  const auto b2 = span_basis({X});
  CHECK(b2.size() == 1);
  CHECK((b2.A[0] - X).norm() == 0.0);

  CHECK_THROWS_AS(span_basis({}), EmptyFamily);
}

TEST_CASE("span_basis output is independent and spans the family") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.uniform_int(2, 4);
    std::vector<CMatrix> F;
    const int gen = rng.uniform_int(1, 4);
    for (int j = 0; j < gen; ++j) F.push_back(random_complex(n, rng));
    // toss in dependent combinations
    F.push_back(F[0] * 2.0);
    if (gen >= 2) F.push_back(F[0] + F[1]);
    const auto basis = span_basis(F);
    CHECK(vectorized_rank(basis.A, 1e-9) == basis.size());
    CHECK(vectorized_rank(F, 1e-9) == basis.size());
    // every member projects onto the basis with negligible residual
    for (const auto& M : F) {
      std::vector<CMatrix> aug = basis.A;
      aug.push_back(M);
      CHECK(vectorized_rank(aug, 1e-9) == basis.size());
    }
  }
}

TEST_CASE("apply_affine on tuples and points") {
  Rng rng(23);
  const auto t = random_hermitian_tuple(3, 2, rng);

  AffineMap id{CMatrix::Identity(2, 2), CVector::Zero(2)};
  const auto same = apply_affine(t, id);
  CHECK((same.A[0] - t.A[0]).norm() == 0.0);
  CHECK((same.A[1] - t.A[1]).norm() == 0.0);

  // translation by f shifts every range point by (tr C) f
  const auto C = make_weight(1, 3);
  AffineMap shift{CMatrix::Identity(2, 2), CVector::Zero(2)};
  shift.f << Complex(0.7, 0), Complex(-0.3, 0);
  const auto shifted = apply_affine(t, shift);
  const CMatrix U = random_unitary(3, 99);
  const CVector p0 = point_at(t, C, U);
  const CVector p1 = point_at(shifted, C, U);
  const double trC = 1.0;
  CHECK(near((p1 - p0 - trC * shift.f).norm(), 0.0, 1e-12));

  // a quarter-turn sends the square's vertex (1,1) to (0, sqrt 2)
  CVector v(2);
  v << Complex(1, 0), Complex(1, 0);
  AffineMap rot{CMatrix::Zero(2, 2), CVector::Zero(2)};
  const double c45 = std::sqrt(0.5);
  rot.R << Complex(c45, 0), Complex(-c45, 0), Complex(c45, 0), Complex(c45, 0);
  const auto moved = apply_affine(std::vector<CVector>{v}, rot);
  CHECK(near(moved[0][0].real(), 0.0, 1e-15));
  CHECK(near(moved[0][1].real(), std::sqrt(2.0), 1e-15));

  AffineMap bad{CMatrix::Zero(2, 2), CVector::Zero(2)};
  CHECK_THROWS_AS(apply_affine(t, bad), SingularMap);
}

TEST_CASE("affine equivariance of range points under matched unitaries") {
  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = rng.uniform_int(2, 5);
    const int m = rng.uniform_int(1, 3);
    const auto t = random_hermitian_tuple(n, m, rng);
    AffineMap map{CMatrix::Zero(m, m), CVector::Zero(m)};
    do {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) map.R(i, j) = rng.normal();
        map.f[i] = rng.normal();
      }
    } while ([&] {
      Eigen::JacobiSVD<CMatrix> svd(map.R);
      return svd.singularValues().minCoeff() < 1e-3;
    }());
    const auto B = apply_affine(t, map);
    const auto C = make_weight(rng.uniform_int(1, n - 1), n);
    const double trC = C.c.sum();
    for (int probe = 0; probe < 5; ++probe) {
      const CMatrix U = random_unitary(n, 7000 + 10 * trial + probe);
      const CVector pa = point_at(t, C, U);
      const CVector pb = point_at(B, C, U);
      CHECK((pb - (map.R * pa + trC * map.f)).norm() <= 1e-10 * (1.0 + pa.norm()));
    }
  }
}

TEST_CASE("classify_flat") {
  const auto C3 = make_weight(1, 3);

  MatrixTuple scalars({2.0 * CMatrix::Identity(3, 3), 3.0 * CMatrix::Identity(3, 3)});
  CHECK(classify_flat(scalars, C3).kind == Flatness::Singleton);

  Rng rng(41);
  const CMatrix Hw = random_hermitian(3, rng);
  std::vector<CMatrix> seg;
  for (int j = 0; j < 3; ++j) {
    const Complex a = rng.complex_normal();
    const Complex b = rng.complex_normal();
    seg.push_back(a * CMatrix::Identity(3, 3) + b * Hw);
  }
  const auto rep = classify_flat(MatrixTuple(seg), C3);
  CHECK(rep.kind == Flatness::Segment);
  // the witness must be a real multiple of the traceless part of Hw
  const CMatrix Hw0 = Hw - (Hw.trace() / 3.0) * CMatrix::Identity(3, 3);
  const Complex coef = (Hw0.array().conjugate() * rep.segment_direction.array()).sum() /
                       Hw0.squaredNorm();
  CHECK((rep.segment_direction - coef * Hw0).norm() <= 1e-8 * rep.segment_direction.norm());
  CHECK(std::abs(coef.imag()) <= 1e-9);

  const auto p = demo_problem("ex3.1");
  CHECK(classify_flat(p.tuple, make_weight(1, 5)).kind == Flatness::Higher);
  // the identity and the two Hermitian parts span three dimensions
  const auto H = hermitian_expand(p.tuple);
  CHECK(vectorized_rank({CMatrix::Identity(5, 5), H[0], H[1]}, 1e-9) == 3);
}

TEST_CASE("classify_flat is invariant under unitary similarity") {
  Rng rng(47);
  const auto p = demo_problem("ex3.1");
  const auto C = make_weight(2, 5);
  const CMatrix V = random_unitary(5, 77);
  std::vector<CMatrix> conj;
  for (const auto& M : p.tuple.A) conj.push_back(V.adjoint() * M * V);
  CHECK(classify_flat(MatrixTuple(conj), C).kind == Flatness::Higher);

  MatrixTuple scalars({Complex(1, 2) * CMatrix::Identity(4, 4)});
  const CMatrix W = random_unitary(4, 78);
  MatrixTuple conj2({W.adjoint() * scalars.A[0] * W});
  CHECK(classify_flat(conj2, make_weight(2, 4)).kind == Flatness::Singleton);
}

TEST_CASE("weights reject the scalar case") {
  CHECK_THROWS_AS(make_weight(RVector::Constant(4, 2.5)), ScalarWeight);
  CHECK_THROWS_AS(make_weight(4, 4), BadWeight);   // k = n collapses to a point
  CHECK_THROWS_AS(make_weight(0, 4), BadWeight);
}
