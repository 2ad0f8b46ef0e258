#include <gtest/gtest.h>

#include <cmath>

#include "gencurv/families.hpp"
#include "random_instances.hpp"

using namespace gencurv;
using gencurv::testing::InstanceGenerator;

namespace {

LieAlgebra diagonalAlgebra(double a1, double a2, double a3, const std::vector<double>& eps) {
  LieAlgebra alg = makeLieAlgebra(3);
  const double al[3] = {a1, a2, a3};
  for (std::size_t a = 0; a < 3; ++a) {
    std::size_t b = (a + 1) % 3, c = (a + 2) % 3;
    alg.kappa(a, b, c) = al[c] * eps[c];
    alg.kappa(b, a, c) = -al[c] * eps[c];
  }
  return alg;
}

GeneralizedRicci ricciOf(const AdaptedBasis& b, const Divergence& delta) {
  return generalizedRicci(dorfmanTensor(b), delta);
}

double residualOf(const AdaptedBasis& b, const Divergence& delta) {
  return isGeneralizedEinstein(ricciOf(b, delta)).residual;
}

}  // namespace

TEST(CurvatureD0, AbelianFlat) {
  AdaptedBasis b = adaptedBasisOrthonormal(abelian(3), {1, 1, 1}, Tensor::cube(3, 3));
  EXPECT_EQ(curvatureD0(dorfmanTensor(b)).maxAbs(), 0.0);
}

TEST(CurvatureD0, MatchesOperatorComposition) {
  InstanceGenerator gen(41);
  for (int t = 0; t < 30; ++t) {
    auto inst = gen.next(2 + t % 2);
    DorfmanTensor B = dorfmanTensor(inst.basis);
    GeneralizedRicci a = ricciFromCurvature(curvatureD0(B), B.n, B.eta);
    GeneralizedRicci b = ricciFromCurvature(curvatureOfConnection(canonicalConnection(B), B), B.n, B.eta);
    EXPECT_LE(maxAbsDiff(a.plus, b.plus), 1e-9);
    EXPECT_LE(maxAbsDiff(a.minus, b.minus), 1e-9);
  }
}

TEST(Ricci, FormulaMatchesCurvatureTrace) {
  InstanceGenerator gen(42);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    auto inst = gen.next(2 + t % 2);
    DorfmanTensor B = dorfmanTensor(inst.basis);
    GeneralizedRicci f = generalizedRicci(B, inst.delta);
    Connection D = prescribedDivergenceConnection(B, inst.delta);
    GeneralizedRicci c = ricciFromCurvature(curvatureOfConnection(D, B), B.n, B.eta);
    worst = std::max({worst, maxAbsDiff(f.plus, c.plus), maxAbsDiff(f.minus, c.minus)});
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Ricci, ZeroDivergenceSymmetry) {
  InstanceGenerator gen(43);
  for (int t = 0; t < 100; ++t) {
    auto inst = gen.next(2 + t % 3, true, false);
    GeneralizedRicci r = ricciOf(inst.basis, inst.delta);
    EXPECT_LE(maxAbsDiff(r.plus, r.minus.transpose()), tolerance());
  }
}

TEST(Ricci, SymmetryCriterion) {
  InstanceGenerator gen(44);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 2 + t % 2;
    auto inst = gen.next(n);
    DorfmanTensor B = dorfmanTensor(inst.basis);
    GeneralizedRicci r = generalizedRicci(B, inst.delta);
    DivergenceTerms d = divergenceTerms(B, inst.delta);
    Matrix asym = r.plus - r.minus.transpose();
    Matrix terms = d.plus - d.minus.transpose();
    EXPECT_LE(maxAbsDiff(asym, terms), 1e-12);
    // a divergence in the kernel of the difference gives a symmetric tensor
    Matrix lin(n * n, 2 * n);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      Divergence e(2 * n, 0.0);
      e[k] = 1;
      DivergenceTerms dk = divergenceTerms(B, e);
      Matrix diff = dk.plus - dk.minus.transpose();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < n; ++a) lin(i * n + a, k) = diff(i, a);
    }
    Matrix ker = nullspace(lin, 1e-10);
    for (std::size_t c = 0; c < ker.cols(); ++c) {
      GeneralizedRicci s = generalizedRicci(B, ker.column(c));
      EXPECT_LE(maxAbsDiff(s.plus, s.minus.transpose()), 1e-9);
    }
    if (maxAbsDiff(d.plus, d.minus.transpose()) > 1e-6) EXPECT_GT(asym.maxAbs(), 1e-9);
  }
}

TEST(Einstein, So3Family) {
  std::vector<double> eps{1, 1, 1};
  LieAlgebra alg = diagonalAlgebra(1, 1, 1, eps);
  for (double h : {1.0, -1.0}) {
    AdaptedBasis b = adaptedBasisOrthonormal(alg, eps, levi(3) * h);
    EXPECT_TRUE(isGeneralizedEinstein(ricciOf(b, Divergence(6, 0.0))).einstein);
  }
  AdaptedBasis b0 = adaptedBasisOrthonormal(alg, eps, levi(3) * 0.0);
  EXPECT_GE(residualOf(b0, Divergence(6, 0.0)), 0.1);
}

TEST(Einstein, DiagonalXYFormulas) {
  std::vector<double> eps{1, 1, 1};
  AdaptedBasis b = adaptedBasisOrthonormal(diagonalAlgebra(1, 1, 0.1, eps), eps, Tensor::cube(3, 3));
  // R_63: i = 6, a = 3. X1 = X2 = -0.1, Y1 = Y2 = 0.1
  EXPECT_NEAR(ricciOf(b, Divergence(6, 0.0)).plus(2, 2), 0.005, 1e-12);

  InstanceGenerator gen(50);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> e{double(gen.sign()), double(gen.sign()), double(gen.sign())};
    double al[3] = {gen.uniform(-2, 2), gen.uniform(-2, 2), gen.uniform(-2, 2)};
    double h = gen.uniform(-2, 2);
    // H = h vol_g; vol_g(v1, v2, v3) = 1 in an oriented frame
    AdaptedBasis bb = adaptedBasisOrthonormal(diagonalAlgebra(al[0], al[1], al[2], e), e, levi(3) * h);
    GeneralizedRicci r = ricciOf(bb, Divergence(6, 0.0));
    double X[3], Y[3];
    for (int k = 0; k < 3; ++k) {
      int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      X[k] = h - al[k2] + al[k] - al[k1];
      Y[k] = h + al[k2] - al[k] + al[k1];
    }
    for (int k = 0; k < 3; ++k) {
      int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      EXPECT_NEAR(r.plus(k, k), -e[k1] * e[k2] / 4 * (X[k1] * Y[k2] + X[k2] * Y[k1]), 1e-12);
      for (int j = 0; j < 3; ++j)
        if (j != k) EXPECT_NEAR(r.plus(k, j), 0.0, 1e-12);
    }
  }
}

TEST(Einstein, FlatE2) {
  std::vector<double> eps{1, 1, 1};
  AdaptedBasis b = adaptedBasisOrthonormal(diagonalAlgebra(1, 1, 0, eps), eps, Tensor::cube(3, 3));
  EXPECT_LE(residualOf(b, Divergence(6, 0.0)), tolerance());
  EXPECT_LE(leviCivitaCurvature(b).maxAbs(), tolerance());
}

TEST(Einstein, AbelianAnyDivergence) {
  InstanceGenerator gen(45);
  AdaptedBasis b = adaptedBasisOrthonormal(abelian(3), {1, -1, 1}, Tensor::cube(3, 3));
  for (int t = 0; t < 10; ++t) EXPECT_LE(residualOf(b, gen.randomDivergence(3)), tolerance());
}

TEST(Einstein, Heisenberg) {
  for (double form : {3.0, 4.0})
    for (double c : {0.5, 1.0, 2.0}) {
      SolutionFamilyInstance inst = solutionFamily("t1-heis", {{"form", form}, {"c", c}});
      ASSERT_LE(validateLieAlgebra(inst.alg).jacobi, 1e-12);
      EXPECT_LE(residualOf(adaptedBasisOf(inst), Divergence(6, 0.0)), tolerance());
    }
}

TEST(Classical, Examples) {
  AdaptedBasis ab = adaptedBasisOrthonormal(abelian(3), {1, 1, 1}, Tensor::cube(3, 3));
  ClassicalRicci c0 = classicalRicci(ab);
  EXPECT_EQ(c0.ric.maxAbs(), 0.0);
  for (double t : c0.tau) EXPECT_EQ(t, 0.0);
  LieAlgebra so3 = makeLieAlgebra(3);
  so3.kappa = levi(3);
  ClassicalRicci c = classicalRicci(adaptedBasisOrthonormal(so3, {1, 1, 1}, Tensor::cube(3, 3)));
  EXPECT_LE(maxAbsDiff(c.ric, Matrix::identity(3) * 0.5), 1e-15);
}

TEST(Classical, BridgeWithoutFlux) {
  // Ric+_0(v_i - g v_i, v_a + g v_a) = Ric^g(v_a, v_i) - (nabla_a tau)(v_i)
  InstanceGenerator gen(46);
  for (int t = 0; t < 100; ++t) {
    LieAlgebra alg = gen.randomLieAlgebra3(t % 2 == 0);
    AdaptedBasis b = adaptedBasis(alg, makeMetric(gen.randomMetric(3, t % 4)), Tensor::cube(3, 3));
    GeneralizedRicci r = ricciOf(b, Divergence(6, 0.0));
    ClassicalRicci c = classicalRicci(b);
    double scale = std::max(1.0, c.ric.maxAbs());
    EXPECT_LE(maxAbsDiff(r.plus, (c.ric - c.nablaTau).transpose()), 1e-9 * scale);
    EXPECT_LE(maxAbsDiff(solitonResidual(b), r.plus.transpose()), 1e-9 * scale);
    // nabla tau is symmetric because tau vanishes on brackets
    EXPECT_LE(maxAbsDiff(c.nablaTau, c.nablaTau.transpose()), 1e-9 * scale);
  }
}

TEST(Classical, TraceFormKillsBrackets) {
  InstanceGenerator gen(47);
  for (int t = 0; t < 50; ++t) {
    LieAlgebra alg = gen.randomLieAlgebra(2 + t % 4);
    std::vector<double> tau = traceForm(alg);
    for (std::size_t a = 0; a < alg.n; ++a)
      for (std::size_t b = 0; b < alg.n; ++b) {
        double s = 0;
        for (std::size_t c = 0; c < alg.n; ++c) s += tau[c] * alg.kappa(a, b, c);
        EXPECT_NEAR(s, 0.0, 1e-9);
      }
  }
}

TEST(LeviCivita, Symmetries) {
  InstanceGenerator gen(48);
  for (int t = 0; t < 20; ++t) {
    auto inst = gen.next(3, false, false);
    Tensor R = leviCivitaCurvature(inst.basis);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t c = 0; c < 3; ++c)
          for (std::size_t d = 0; d < 3; ++d) {
            EXPECT_NEAR(R(a, b, c, d), -R(b, a, c, d), 1e-9);
            EXPECT_NEAR(R(a, b, c, d), -R(a, b, d, c), 1e-9);
            EXPECT_NEAR(R(a, b, c, d), R(c, d, a, b), 1e-9);
            EXPECT_NEAR(R(a, b, c, d) + R(b, c, a, d) + R(c, a, b, d), 0.0, 1e-9);
          }
    // contracting gives the classical Ricci tensor: Ric(b, c) = sum_a eps_a R(a, b, c, a)
    ClassicalRicci cr = classicalRicci(inst.basis);
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) {
        double s = 0;
        for (std::size_t a = 0; a < 3; ++a) s += inst.basis.eps[a] * R(a, b, c, a);
        EXPECT_NEAR(s, cr.ric(b, c), 1e-9);
      }
  }
}

TEST(Rescale, IdentityAndCovariance) {
  InstanceGenerator gen(49);
  for (int t = 0; t < 30; ++t) {
    auto inst = gen.next(2 + t % 2);
    GeneralizedRicci r = ricciOf(inst.basis, inst.delta);
    Rescaled same = rescale(inst.alg, inst.basis, inst.H, inst.delta, 1, 1.0);
    GeneralizedRicci r1 = ricciOf(same.basis, same.delta);
    EXPECT_LE(maxAbsDiff(r1.plus, r.plus), 1e-12);
    for (int eps : {1, -1})
      for (double mu : {0.5, 2.0, 3.0, 7.0}) {
        Rescaled s = rescale(inst.alg, inst.basis, inst.H, inst.delta, eps, mu);
        GeneralizedRicci rs = ricciOf(s.basis, s.delta);
        double scale = mu * mu * std::max(1.0, r.plus.maxAbs());
        EXPECT_LE(maxAbsDiff(rs.plus, r.plus * (mu * mu)), 1e-9 * scale);
        EXPECT_LE(maxAbsDiff(rs.minus, r.minus * (mu * mu)), 1e-9 * scale);
      }
  }
}

TEST(Rescale, KeepsSo3SolutionEinstein) {
  std::vector<double> eps{1, 1, 1};
  LieAlgebra alg = diagonalAlgebra(1, 1, 1, eps);
  AdaptedBasis b = adaptedBasisOrthonormal(alg, eps, levi(3) * 1.0);
  Rescaled s = rescale(alg, b, levi(3) * 1.0, Divergence(6, 0.0), 1, 2.0);
  EXPECT_LE(residualOf(s.basis, s.delta), tolerance());
  EXPECT_THROW(rescale(alg, b, levi(3), Divergence(6, 0.0), 1, -1.0), InvalidInputError);
}

TEST(Ricci, SkewOnEinsteinWithConstrainedDivergence) {
  // (G, H, g, 0) Einstein and B_ia^c d_c = -B_ai^j d_j  =>  Ric+ = -(Ric-)^T
  std::vector<std::pair<std::string, Params>> bases{{"t1-so3", {{"h", 1.0}}},
                                                    {"t1-so21", {{"h", 1.0}}},
                                                    {"t1-e2", {{"a", 1.0}}},
                                                    {"t1-heis", {}},
                                                    {"t1-r31prime", {{"theta", 1.0}}}};
  std::size_t nontrivial = 0;
  InstanceGenerator gen(51);
  for (const auto& [id, p] : bases) {
    SolutionFamilyInstance inst = solutionFamily(id, p);
    DorfmanTensor B = dorfmanTensor(adaptedBasisOf(inst));
    ASSERT_TRUE(isGeneralizedEinstein(generalizedRicci(B, Divergence(6, 0.0))).einstein) << id;
    Matrix lin(9, 6);
    for (std::size_t k = 0; k < 6; ++k) {
      Divergence e(6, 0.0);
      e[k] = 1;
      DivergenceTerms t = divergenceTerms(B, e);
      Matrix sum = t.plus + t.minus.transpose();
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t a = 0; a < 3; ++a) lin(i * 3 + a, k) = sum(i, a);
    }
    Matrix ker = nullspace(lin, 1e-10);
    nontrivial += ker.cols() > 0;
    for (int t = 0; t < 5 && ker.cols() > 0; ++t) {
      Divergence d(6, 0.0);
      for (std::size_t c = 0; c < ker.cols(); ++c) {
        double w = gen.uniform(-1, 1);
        for (std::size_t k = 0; k < 6; ++k) d[k] += w * ker(k, c);
      }
      GeneralizedRicci r = generalizedRicci(B, d);
      EXPECT_LE(maxAbsDiff(r.plus, r.minus.transpose() * -1.0), 1e-9) << id;
    }
  }
  EXPECT_GT(nontrivial, 0u);
}
