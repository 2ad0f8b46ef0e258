#pragma once

#include <string>
#include <vector>

#include "gencurv/lie.hpp"

namespace gencurv {

// [u, v] = L(u x v) in an oriented orthonormal frame. L(a, b) is the
// coefficient of v_a in L v_b.
struct LEncoding {
  Matrix L;
  std::vector<double> eps;
};

std::vector<double> crossProduct(const std::vector<double>& u, const std::vector<double>& v,
                                 const Frame& frame);
// Frame-level: kappa_ab^c = eps_abd L^{cd}, L^{cd} = L(c, d) eps_d.
LieAlgebra bracketFromL(const LEncoding& enc);
LEncoding lFromBracket(const AdaptedBasis& basis);
LEncoding lFromBracket(const LieAlgebra& alg, const Frame& frame);
bool isGSymmetric(const LEncoding& enc, double tol);

struct NormalFormTag {
  std::string family;  // L1..L5, M1..M4
  std::vector<double> params;
};
std::string describe(const NormalFormTag& tag);

Matrix lNormalFormMatrix(const NormalFormTag& tag);
Matrix mNormalFormMatrix(const NormalFormTag& tag);

struct NormalForm {
  NormalFormTag tag;
  Matrix frame;  // columns: new frame vectors in the old frame coordinates
  std::vector<double> eps;
  Matrix realized;  // the operator in the new frame
  double residual = 0.0;  // |realized - normal form matrix|
};

// Parameter conventions: L1 (a, b, g) with a <= b on the two vectors of equal
// sign (all three sorted when definite); L2 (a, b, g) with b > 0; L3/L4 (a, b);
// L5 (a).
NormalForm normalFormOfSymmetricL(const LEncoding& enc);
// M acts on a two-dimensional space with orthonormal signs eps2; the output
// frame keeps the sign order. M1 (t, e); M2 (t, e) with e > 0; M3/M4 (t).
NormalForm normalFormOfM(const Matrix& M, const std::vector<double>& eps2);

enum class BianchiKind { Abelian, SO3, SO21, E2, E11, Heis, R2R, R3, R3Lambda, R3Prime };

struct BianchiLabel {
  BianchiKind kind = BianchiKind::Abelian;
  double parameter = 0.0;  // lambda for r3,lambda; gamma for r'3,gamma
  std::string name;
};
BianchiLabel identifyBianchi(const LieAlgebra& alg);
std::string bianchiName(BianchiKind kind, double parameter = 0.0);

struct UnimodularKernel {
  Matrix basis;  // n x 2
  bool degenerate = false;
  double gramDet = 0.0;       // of g on the Euclidean-orthonormalized basis
  double idealDefect = 0.0;   // max of |[u,u]| and the part of [g,g] outside u
};
// g in the coordinates of alg.
UnimodularKernel unimodularKernel(const LieAlgebra& alg, const Matrix& g);

// ad_x on the unimodular kernel for x outside it, scaled so that the larger
// real eigenvalue is 1. When real and diagonalizable, A ~ diag(1, s).
struct KernelAction {
  Matrix A;
  bool realEigenvalues = false;
  bool diagonalizable = false;
  double s = 0.0;
};
KernelAction kernelAction(const LieAlgebra& alg);

}  // namespace gencurv
