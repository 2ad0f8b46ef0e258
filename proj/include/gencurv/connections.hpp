#pragma once

#include <vector>

#include "gencurv/courant.hpp"

namespace gencurv {

struct Connection {
  std::size_t n = 0;
  Tensor omega;             // omega_ABC = <D_{e_A} e_B, e_C>
  std::vector<double> eta;
};

// delta_A = delta(e_A)
using Divergence = std::vector<double>;

Connection canonicalConnection(const DorfmanTensor& B);
// Cyclic sum (d omega)(A,B,C) = omega_ABC + omega_BCA + omega_CAB.
Tensor delOperator(const Tensor& omega);
Tensor torsion(const Connection& D, const DorfmanTensor& B);
Divergence divergence(const Connection& D);

struct MetricityReport {
  double pairing = 0.0;   // |omega_ABC + omega_ACB|
  double blocks = 0.0;    // omega_ABC with B, C in different blocks
};
MetricityReport metricity(const Connection& D);

// <alt(s)_u v, w> = s(u,v,w) - s(u,w,v); s symmetric in the first two slots,
// supported on one of the two blocks.
Tensor altMap(const Tensor& sigma, std::size_t n);
// (e^P)^2 (x) e^Q on E, as a (2n)^3 array.
Tensor squareTimes(std::size_t N, std::size_t P, std::size_t Q);

// D0 plus a block-preserving correction whose trace is delta.
Connection prescribedDivergenceConnection(const DorfmanTensor& B, const Divergence& delta);
Tensor divergenceCorrection(std::size_t n, const std::vector<double>& eta, const Divergence& delta);

// Matrices on flattened tensors over one block of dimension n.
// del: V (x) so(V) -> wedge^3 V*, basis (a, b<c) -> (a<b<c).
Matrix delMatrix(std::size_t n);
// alt: Sym^2 V* (x) V* -> V* (x) so(V), basis (a<=b, c) -> (a, b<c).
Matrix altMatrix(std::size_t n);

Divergence riemannianDivergence(const AdaptedBasis& basis);
// Gamma_abc = g(nabla_{v_a} v_b, v_c)
Tensor christoffel(const AdaptedBasis& basis);
// tr(nabla v_c) = sum_a eps_a Gamma_aca, repeated on both blocks.
Divergence divergenceFromChristoffel(const AdaptedBasis& basis);

}  // namespace gencurv
