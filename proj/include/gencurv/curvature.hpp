#pragma once

#include "gencurv/connections.hpp"

namespace gencurv {

// R(A,B,C,D) = <R(e_A, e_B) e_C, e_D> as a (2n)^4 array.
using Curvature = Tensor;

// Closed formulas for the mixed families R_ajcd and R_ibkl of D0; other entries zero.
Curvature curvatureD0(const DorfmanTensor& B);
// R(u,v)w = D_u D_v w - D_v D_u w - D_[u,v] w on the adapted generators.
Curvature curvatureOfConnection(const Connection& D, const DorfmanTensor& B);

struct GeneralizedRicci {
  Matrix plus;   // plus(i, a) = Ric+(e_{n+i}, e_a)
  Matrix minus;  // minus(a, i) = Ric-(e_a, e_{n+i})
  Divergence delta;
};

GeneralizedRicci generalizedRicci(const DorfmanTensor& B, const Divergence& delta);
// Traces tr(w -> R(w,u)v) over the block of w.
GeneralizedRicci ricciFromCurvature(const Curvature& R, std::size_t n, const std::vector<double>& eta);

// The divergence contractions B_ia^c d_c and B_ai^j d_j, as plus/minus-shaped blocks.
struct DivergenceTerms {
  Matrix plus;   // (i, a)
  Matrix minus;  // (a, i)
};
DivergenceTerms divergenceTerms(const DorfmanTensor& B, const Divergence& delta);

struct EinsteinVerdict {
  bool einstein = false;
  double residual = 0.0;  // max |entry| over both blocks
};
EinsteinVerdict isGeneralizedEinstein(const GeneralizedRicci& ric);
EinsteinVerdict isGeneralizedEinstein(const GeneralizedRicci& ric, double tol);

struct ClassicalRicci {
  Matrix ric;
  std::vector<double> tau;
  Matrix nablaTau;  // (nabla_{v_a} tau)(v_b)
};
ClassicalRicci classicalRicci(const AdaptedBasis& basis);
// g(R(v_a, v_b) v_c, v_d) for the Levi-Civita connection of g.
Tensor leviCivitaCurvature(const AdaptedBasis& basis);
// Ric^g - nabla tau; with H = 0 this is Ric+_0(v - gv, u + gu), so it
// vanishes exactly on the divergence-free Einstein structures.
Matrix solitonResidual(const AdaptedBasis& basis);

struct Rescaled {
  Metric metric;
  Tensor H;
  Divergence delta;
  AdaptedBasis basis;  // frame mu * v with signs eps * eps_a
};
// g' = eps mu^-2 g, H' = eps mu^-2 H, delta' = mu delta (frame components).
Rescaled rescale(const LieAlgebra& alg, const AdaptedBasis& basis, const Tensor& H,
                 const Divergence& delta, int eps, double mu);

}  // namespace gencurv
