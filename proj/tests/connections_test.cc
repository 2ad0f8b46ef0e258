#include <gtest/gtest.h>

#include <cmath>

#include "gencurv/connections.hpp"
#include "random_instances.hpp"

using namespace gencurv;
using gencurv::testing::InstanceGenerator;

namespace {

AdaptedBasis so3TypeBasis() {
  // alpha = (1,1,1), h = 1, Euclidean: B_123 = 2
  std::vector<double> eps{1, 1, 1};
  LieAlgebra alg = makeLieAlgebra(3);
  alg.kappa = levi(3);
  return adaptedBasisOrthonormal(alg, eps, levi(3) * 1.0);
}

}  // namespace

TEST(Canonical, AbelianIsZero) {
  AdaptedBasis b = adaptedBasisOrthonormal(abelian(3), {1, 1, -1}, Tensor::cube(3, 3));
  EXPECT_EQ(canonicalConnection(dorfmanTensor(b)).omega.maxAbs(), 0.0);
}

TEST(Canonical, So3TypeComponent) {
  DorfmanTensor B = dorfmanTensor(so3TypeBasis());
  ASSERT_NEAR(B.B(0, 1, 2), 2.0, 1e-15);
  EXPECT_NEAR(canonicalConnection(B).omega(0, 1, 2), 2.0 / 3.0, 1e-15);
}

TEST(Canonical, TorsionFreeDivergenceFreeMetric) {
  InstanceGenerator gen(31);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + t % 3;
    auto inst = gen.next(n);
    DorfmanTensor B = dorfmanTensor(inst.basis);
    Connection D = canonicalConnection(B);
    EXPECT_LE(torsion(D, B).maxAbs(), tolerance());
    for (double d : divergence(D)) EXPECT_LE(std::abs(d), tolerance());
    MetricityReport m = metricity(D);
    EXPECT_LE(m.pairing, tolerance());
    EXPECT_LE(m.blocks, tolerance());
  }
}

TEST(Torsion, LinearInOmega) {
  InstanceGenerator gen(32);
  auto inst = gen.next(3);
  DorfmanTensor B = dorfmanTensor(inst.basis);
  Connection D = canonicalConnection(B);
  Connection zero = D;
  zero.omega = zero.omega * 0.0;
  EXPECT_LE(maxAbsDiff(torsion(zero, B), B.B * -1.0), tolerance());
  Connection twice = D;
  twice.omega = twice.omega * 2.0;
  EXPECT_LE(maxAbsDiff(torsion(twice, B), B.B), tolerance());
}

TEST(Divergence, MatchesTraceLoop) {
  InstanceGenerator gen(33);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 2 + t % 2, N = 2 * n;
    Connection D{n, Tensor::cube(N, 3), std::vector<double>(N)};
    for (std::size_t A = 0; A < N; ++A) D.eta[A] = A < n ? 1.0 : -1.0;
    for (double& x : D.omega.data()) x = gen.uniform(-1, 1);
    Divergence d = divergence(D);
    // tr(D e_B) = sum_A <D_{e_A} e_B, e^A>
    for (std::size_t B = 0; B < N; ++B) {
      double s = 0;
      for (std::size_t A = 0; A < N; ++A) s += D.omega(A, B, A) / D.eta[A];
      EXPECT_NEAR(d[B], s, 1e-14);
    }
  }
}

TEST(Alt, SpecialElementDivergence) {
  // alt((e^1)^2 (x) e^2) on a Euclidean E+ block: divergence -e^2
  Connection S{3, altMap(squareTimes(6, 0, 1), 3), {1, 1, 1, -1, -1, -1}};
  Divergence d = divergence(S);
  std::vector<double> expect{0, -1, 0, 0, 0, 0};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(d[i], expect[i], 1e-15) << i;
  EXPECT_LE(delOperator(S.omega).maxAbs(), tolerance());
}

TEST(Alt, TotallySymmetricMapsToZero) {
  Tensor sigma = Tensor::cube(6, 3);
  InstanceGenerator gen(34);
  Tensor r = Tensor::cube(3, 3);
  for (double& x : r.data()) x = gen.uniform(-1, 1);
  r = symmetrize(r);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) sigma(a, b, c) = r(a, b, c);
  EXPECT_LE(altMap(sigma, 3).maxAbs(), tolerance());
}

TEST(Alt, RejectsUnsymmetricInput) {
  Tensor sigma = Tensor::cube(6, 3);
  sigma(0, 1, 2) = 1;
  EXPECT_THROW(altMap(sigma, 3), InvalidInputError);
}

TEST(Prolongation, KernelDimension) {
  for (std::size_t n = 2; n <= 5; ++n) {
    Matrix del = delMatrix(n);
    std::size_t domain = n * n * (n - 1) / 2;
    std::size_t expect = n * n * (n + 1) / 2 - n * (n + 1) * (n + 2) / 6;
    std::size_t ker = domain - (n >= 3 ? rank(del, 1e-9) : 0);
    EXPECT_EQ(ker, expect) << "n=" << n;
    EXPECT_EQ(rank(altMatrix(n), 1e-9), expect) << "n=" << n;
    // image of alt lies in ker del
    if (n >= 3) EXPECT_LE((del * altMatrix(n)).maxAbs(), 1e-12);
  }
}

TEST(Prescribed, ZeroDeltaIsCanonical) {
  InstanceGenerator gen(35);
  auto inst = gen.next(3);
  DorfmanTensor B = dorfmanTensor(inst.basis);
  Divergence zero(6, 0.0);
  EXPECT_EQ(maxAbsDiff(prescribedDivergenceConnection(B, zero).omega, canonicalConnection(B).omega), 0.0);
}

TEST(Prescribed, HitsDeltaTorsionFree) {
  InstanceGenerator gen(36);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + t % 3;
    auto inst = gen.next(n);
    DorfmanTensor B = dorfmanTensor(inst.basis);
    Connection D = prescribedDivergenceConnection(B, inst.delta);
    Divergence d = divergence(D);
    for (std::size_t i = 0; i < 2 * n; ++i) EXPECT_NEAR(d[i], inst.delta[i], tolerance());
    EXPECT_LE(torsion(D, B).maxAbs(), tolerance());
    MetricityReport m = metricity(D);
    EXPECT_LE(std::max(m.pairing, m.blocks), tolerance());
  }
}

TEST(Prescribed, AbelianAnyDelta) {
  AdaptedBasis b = adaptedBasisOrthonormal(abelian(3), {1, 1, 1}, Tensor::cube(3, 3));
  Divergence delta{0.5, -1, 2, 0.1, 0, -0.3};
  Divergence d = divergence(prescribedDivergenceConnection(dorfmanTensor(b), delta));
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(d[i], delta[i], 1e-15);
}

TEST(Riemannian, UnimodularIsZero) {
  InstanceGenerator gen(37);
  for (int t = 0; t < 20; ++t) {
    LieAlgebra alg = gen.randomLieAlgebra3(true);
    AdaptedBasis b = adaptedBasis(alg, makeMetric(gen.randomMetric(3, t % 4)), Tensor::cube(3, 3));
    for (double d : riemannianDivergence(b)) EXPECT_LE(std::abs(d), 1e-9);
  }
}

TEST(Riemannian, NonunimodularTheta) {
  for (double theta : {0.5, 1.0, 2.0}) {
    // [v2,v1] = e1 theta v1 - e3 theta v3, [v2,v3] = e1 theta v1 + e3 theta v3
    std::vector<double> eps{1, -1, 1};
    LieAlgebra alg = makeLieAlgebra(3);
    auto set = [&](int a, int b, int c, double v) {
      alg.kappa(a, b, c) += v;
      alg.kappa(b, a, c) -= v;
    };
    set(1, 0, 0, eps[0] * theta);
    set(1, 0, 2, -eps[2] * theta);
    set(1, 2, 0, eps[0] * theta);
    set(1, 2, 2, eps[2] * theta);
    ASSERT_TRUE(validateLieAlgebra(alg).valid);
    AdaptedBasis b = adaptedBasisOrthonormal(alg, eps, Tensor::cube(3, 3));
    Divergence d = riemannianDivergence(b);
    std::vector<double> expect{0, -2 * theta, 0, 0, -2 * theta, 0};
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(d[i], expect[i], 1e-14);
  }
}

TEST(Riemannian, MatchesBruteForceTrace) {
  // r2 + R: [v2, v1] = v1
  LieAlgebra alg = makeLieAlgebra(3);
  alg.kappa(1, 0, 0) = 1;
  alg.kappa(0, 1, 0) = -1;
  AdaptedBasis b = adaptedBasisOrthonormal(alg, {1, -1, 1}, Tensor::cube(3, 3));
  Divergence d = riemannianDivergence(b);
  for (std::size_t a = 0; a < 3; ++a) {
    double tr = 0;
    for (std::size_t c = 0; c < 3; ++c) tr += adMatrix(alg, a)(c, c);
    EXPECT_EQ(d[a], -tr);
    EXPECT_EQ(d[a + 3], -tr);
  }
}

TEST(Riemannian, MatchesChristoffelTrace) {
  InstanceGenerator gen(38);
  for (int t = 0; t < 100; ++t) {
    auto inst = gen.next(2 + t % 3, true, false);
    Divergence a = riemannianDivergence(inst.basis), b = divergenceFromChristoffel(inst.basis);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tolerance());
  }
}

TEST(Christoffel, Examples) {
  AdaptedBasis ab = adaptedBasisOrthonormal(abelian(3), {1, 1, 1}, Tensor::cube(3, 3));
  EXPECT_EQ(christoffel(ab).maxAbs(), 0.0);
  LieAlgebra so3 = makeLieAlgebra(3);
  so3.kappa = levi(3);
  Tensor G = christoffel(adaptedBasisOrthonormal(so3, {1, 1, 1}, Tensor::cube(3, 3)));
  EXPECT_LE(maxAbsDiff(G, levi(3) * 0.5), 1e-15);
}

TEST(Christoffel, DorfmanSplit) {
  // B_{a j k} = H_{a j' k'} / 2 - Gamma_{a j' k'} with j, k in the E- block
  InstanceGenerator gen(39);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 2 + t % 3;
    auto inst = gen.next(n);
    DorfmanTensor B = dorfmanTensor(inst.basis);
    Tensor G = christoffel(inst.basis);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          EXPECT_NEAR(B.B(a, n + j, n + k), 0.5 * inst.basis.HOrtho(a, j, k) - G(a, j, k), 1e-12);
  }
}
