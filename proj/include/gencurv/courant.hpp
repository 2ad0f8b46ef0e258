#pragma once

#include <vector>

#include "gencurv/lie.hpp"

namespace gencurv {

struct GeneralizedVector {
  std::vector<double> x;   // vector part
  std::vector<double> xi;  // covector part
};

// [X+xi, Y+eta]_H = [X,Y] - ad_X^* eta - i_Y d xi + H(X,Y,.), ad_X^* eta = eta o ad_X
GeneralizedVector dorfmanBracket(const GeneralizedVector& u, const GeneralizedVector& v,
                                 const LieAlgebra& alg, const Tensor& H);
// 1/2 (xi(Y) + eta(X))
double scalarProduct(const GeneralizedVector& u, const GeneralizedVector& v);

// e_a = v_a + g v_a, e_{n+a} = v_a - g v_a in the original coordinates.
std::vector<GeneralizedVector> adaptedVectors(const AdaptedBasis& basis);
// Same vectors written in the frame itself.
std::vector<GeneralizedVector> adaptedVectorsInFrame(const AdaptedBasis& basis);

struct DorfmanTensor {
  std::size_t n = 0;
  Tensor B;                 // B_ABC = <[e_A, e_B]_H, e_C>
  std::vector<double> eta;  // diagonal pairing on E
};

// Closed-form component families from kappa_abc and H_abc.
DorfmanTensor dorfmanTensor(const AdaptedBasis& basis);
// <[e_A, e_B]_H, e_C> evaluated with the bracket in the original coordinates.
DorfmanTensor dorfmanTensorDirect(const AdaptedBasis& basis, const LieAlgebra& alg,
                                  const Tensor& H);

// B_AB^C
Tensor raiseLast(const Tensor& B, const std::vector<double>& eta);

struct CourantReport {
  double skew = 0.0;    // total skewness of B
  double c1 = 0.0;      // [u,[v,w]] = [[u,v],w] + [v,[u,w]] on basis sections
  double c2 = 0.0;      // B_ABC + B_ACB
  double c3 = 0.0;      // B_ABC + B_BAC
  bool ok = false;
};
CourantReport checkCourantAxioms(const DorfmanTensor& B);

}  // namespace gencurv
