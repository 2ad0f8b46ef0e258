#include <gtest/gtest.h>

#include <cmath>

#include "gencurv/lie.hpp"
#include "random_instances.hpp"

using namespace gencurv;
using gencurv::testing::InstanceGenerator;

namespace {

LieAlgebra so3() {
  LieAlgebra alg = makeLieAlgebra(3);
  alg.kappa = levi(3);
  return alg;
}

LieAlgebra heis() {
  LieAlgebra alg = makeLieAlgebra(3);
  alg.kappa(0, 1, 2) = 1;
  alg.kappa(1, 0, 2) = -1;
  return alg;
}

Tensor randomForm(InstanceGenerator& gen, std::size_t n, std::size_t k) {
  Tensor t(std::vector<std::size_t>(k, n));
  for (double& x : t.data()) x = gen.uniform(-1, 1);
  return antisymmetrize(t);
}

}  // namespace

TEST(Validate, AbelianAndSo3) {
  EXPECT_TRUE(validateLieAlgebra(abelian(3)).valid);
  EXPECT_TRUE(validateLieAlgebra(so3()).valid);
}

TEST(Validate, JacobiMatchesTripleLoop) {
  LieAlgebra alg = makeLieAlgebra(3);
  auto set = [&](int a, int b, int c, double v) {
    alg.kappa(a, b, c) = v;
    alg.kappa(b, a, c) = -v;
  };
  set(0, 1, 2, 1);
  set(0, 2, 1, 1);
  LieValidity r = validateLieAlgebra(alg);
  double worst = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int e = 0; e < 3; ++e) {
          double s = 0;
          for (int d = 0; d < 3; ++d) {
            s += alg.kappa(a, b, d) * alg.kappa(d, c, e);
            s += alg.kappa(b, c, d) * alg.kappa(d, a, e);
            s += alg.kappa(c, a, d) * alg.kappa(d, b, e);
          }
          worst = std::max(worst, std::abs(s));
        }
  EXPECT_EQ(r.jacobi, worst);
  EXPECT_EQ(r.antisymmetry, 0.0);
  // [v1,v2] = v3, [v1,v3] = v2 is r2-like and satisfies Jacobi
  EXPECT_TRUE(r.valid);
  // [v2,v3] = v2 breaks it: J(v1,v2,v3) = v3
  set(1, 2, 1, 1);
  EXPECT_FALSE(validateLieAlgebra(alg).valid);
}

TEST(Validate, RandomAlgebrasSatisfyJacobi) {
  InstanceGenerator gen(21);
  for (std::size_t n = 1; n <= 5; ++n)
    for (int k = 0; k < 20; ++k) EXPECT_LE(validateLieAlgebra(gen.randomLieAlgebra(n)).jacobi, 1e3 * tolerance());
}

TEST(TraceForm, SolvableExample) {
  // [v2, v1] = v1: tr ad_v2 = 1
  LieAlgebra alg = makeLieAlgebra(3);
  alg.kappa(1, 0, 0) = 1;
  alg.kappa(0, 1, 0) = -1;
  std::vector<double> tau = traceForm(alg);
  EXPECT_EQ(tau, (std::vector<double>{0, 1, 0}));
  EXPECT_LE(maxAbsDiff(killingForm(so3()), Matrix::identity(3) * -2.0), 1e-12);
}

TEST(Ce, AbelianAndTopDegreeVanish) {
  InstanceGenerator gen(2);
  EXPECT_EQ(ceDifferential(randomForm(gen, 3, 2), abelian(3)).maxAbs(), 0.0);
  for (int k = 0; k < 10; ++k)
    EXPECT_LE(ceDifferential(gen.randomThreeForm(3), gen.randomLieAlgebra(3)).maxAbs(), tolerance());
}

TEST(Ce, HeisenbergOneForms) {
  LieAlgebra h = heis();
  Tensor d3 = ceDifferential(fromVector({0, 0, 1}), h);
  EXPECT_EQ(d3(0, 1), -1.0);
  EXPECT_EQ(d3(1, 0), 1.0);
  EXPECT_EQ(d3(0, 2), 0.0);
  EXPECT_EQ(ceDifferential(fromVector({1, 0, 0}), h).maxAbs(), 0.0);
}

TEST(Ce, SquareIsZero) {
  InstanceGenerator gen(4);
  for (std::size_t n = 2; n <= 5; ++n)
    for (int t = 0; t < 10; ++t) {
      LieAlgebra alg = gen.randomLieAlgebra(n);
      for (std::size_t k = 1; k + 2 <= n; ++k) {
        Tensor dd = ceDifferential(ceDifferential(randomForm(gen, n, k), alg), alg);
        EXPECT_LE(dd.maxAbs(), 1e3 * tolerance()) << "n=" << n << " k=" << k;
      }
    }
}

TEST(ChangeBasis, PreservesValidity) {
  InstanceGenerator gen(8);
  LieAlgebra alg = changeBasis(so3(), gen.randomInvertible(3));
  EXPECT_TRUE(validateLieAlgebra(alg).valid);
}

TEST(Orthonormalize, Examples) {
  Frame f = orthonormalize(makeMetric(Matrix::identity(3)));
  EXPECT_LE(maxAbsDiff(f.v, Matrix::identity(3)), 1e-12);
  EXPECT_EQ(f.eps, (std::vector<double>{1, 1, 1}));
  Frame d = orthonormalize(makeMetric(Matrix::diagonal({4, 1, -1})));
  EXPECT_LE(maxAbsDiff(d.v, Matrix::diagonal({0.5, 1, 1})), 1e-12);
  EXPECT_EQ(d.eps, (std::vector<double>{1, 1, -1}));
}

TEST(Orthonormalize, RandomMetricsEverySignature) {
  InstanceGenerator gen(13);
  for (std::size_t n = 2; n <= 4; ++n)
    for (int p = 0; p <= static_cast<int>(n); ++p)
      for (int t = 0; t < 100; ++t) {
        Matrix g = gen.randomMetric(n, p);
        Frame f = orthonormalize(makeMetric(g));
        EXPECT_LE(maxAbsDiff(f.v.transpose() * g * f.v, Matrix::diagonal(f.eps)), 1e3 * tolerance());
        EXPECT_GT(determinant(f.v), 0.0);
      }
}

TEST(Orthonormalize, DegenerateThrows) {
  EXPECT_THROW(makeMetric(Matrix::diagonal({1, 0, 1})), SingularityError);
}

TEST(GeneralizedMetric, BlockDiagonalHasNoBField) {
  Matrix g = Matrix::diagonal({1, 2, -1});
  BFieldNormalForm nf = bFieldNormalForm(generalizedMetricOf(g, Matrix(3, 3)));
  EXPECT_EQ(nf.blocks.beta.maxAbs(), 0.0);
  EXPECT_LE(maxAbsDiff(nf.phi, Matrix::identity(6)), 0.0);
  EXPECT_LE(maxAbsDiff(nf.metric.g.matrix(), g), 1e-12);
}

TEST(GeneralizedMetric, RecoversSimpleBField) {
  // b = e1 ^ e2, i.e. beta e1 = e2*, beta e2 = -e1*
  Matrix beta(3, 3);
  beta(1, 0) = 1;
  beta(0, 1) = -1;
  BFieldNormalForm nf = bFieldNormalForm(generalizedMetricOf(Matrix::identity(3), beta));
  EXPECT_LE(maxAbsDiff(nf.blocks.beta, beta), 1e-12);
  Tensor b = twoFormOf(nf.blocks.beta);
  EXPECT_NEAR(b(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(b(1, 0), -1.0, 1e-12);
}

TEST(GeneralizedMetric, RandomRoundTripAndBlockIdentities) {
  InstanceGenerator gen(17);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + t % 3;
    Matrix g = gen.randomMetric(n, t % (static_cast<int>(n) + 1));
    Matrix beta = gen.randomMatrix(n, n, -1, 1);
    beta = (beta - beta.transpose()) * 0.5;
    Matrix G = generalizedMetricOf(g, beta);
    EXPECT_NEAR(trace(generalizedMetricEndomorphism(G)), 0.0, 1e-9);
    LieAlgebra alg = gen.randomLieAlgebra(n);
    BFieldNormalForm nf = bFieldNormalForm(G, &alg);
    EXPECT_LE(maxAbsDiff(nf.metric.g.matrix(), g), 1e-8);
    EXPECT_LE(maxAbsDiff(nf.blocks.beta, beta), 1e-8);
    const auto& bl = nf.blocks;
    Matrix gi = inverse(g);
    EXPECT_LE(maxAbsDiff(bl.A * bl.A + gi * bl.h, Matrix::identity(n)), 1e-8);
    Matrix gA = g * bl.A, hA = bl.h * bl.A;
    EXPECT_LE(maxAbsDiff(gA, gA.transpose() * -1.0), 1e-8);
    EXPECT_LE(maxAbsDiff(hA, hA.transpose() * -1.0), 1e-8);
    // pulling back along phi gives the block-diagonal metric
    Matrix Gg = nf.phi.transpose() * generalizedMetricOf(g, Matrix(n, n)) * nf.phi;
    EXPECT_LE(maxAbsDiff(Gg, G), 1e-8);
    ASSERT_TRUE(nf.dBeta.has_value());
    EXPECT_LE(maxAbsDiff(*nf.dBeta, ceDifferential(twoFormOf(beta), alg)), 1e-8);
  }
}

TEST(GeneralizedMetric, RejectsNonInvolution) {
  Matrix G = Matrix::identity(6);
  EXPECT_THROW(bFieldNormalForm(G), InvalidInputError);
}

TEST(AdaptedBasis, FrameConstantsAreOrthonormalComponents) {
  InstanceGenerator gen(23);
  for (int t = 0; t < 20; ++t) {
    auto inst = gen.next(3);
    const AdaptedBasis& b = inst.basis;
    EXPECT_LE(maxAbsDiff(b.v.transpose() * b.g * b.v, Matrix::diagonal(b.eps)), 1e-9);
    for (std::size_t a = 0; a < 3; ++a) {
      EXPECT_EQ(b.eta[a], b.eps[a]);
      EXPECT_EQ(b.eta[a + 3], -b.eps[a]);
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t d = 0; d < 3; ++d)
          EXPECT_NEAR(b.kappaOrtho(a, c, d), b.kappaFrame(a, c, d) * b.eps[d], 1e-9);
    }
  }
}
