#pragma once

#include <optional>
#include <vector>

#include "gencurv/linalg.hpp"

namespace gencurv {

// [v_a, v_b] = kappa(a,b,c) v_c
struct LieAlgebra {
  std::size_t n = 0;
  Tensor kappa;
};

LieAlgebra makeLieAlgebra(std::size_t n);
LieAlgebra abelian(std::size_t n);

struct LieValidity {
  double antisymmetry = 0.0;
  double jacobi = 0.0;
  bool valid = false;
};
LieValidity validateLieAlgebra(const LieAlgebra& alg);

std::vector<double> bracket(const LieAlgebra& alg, const std::vector<double>& x,
                            const std::vector<double>& y);
// Column b holds [v_a, v_b].
Matrix adMatrix(const LieAlgebra& alg, std::size_t a);
// tau_a = tr ad_{v_a}
std::vector<double> traceForm(const LieAlgebra& alg);
Matrix killingForm(const LieAlgebra& alg);

// New basis f_a = sum_p P(p,a) e_p.
LieAlgebra changeBasis(const LieAlgebra& alg, const Matrix& P);
Tensor changeBasisCovariant(const Tensor& form, const Matrix& P);

struct Metric {
  BilinearForm g;
  int p = 0;  // positive directions
  int q = 0;
};
Metric makeMetric(const Matrix& g);

bool isAlternating(const Tensor& t, double tol);
// (d w)(x0..xk) = sum_{i<j} (-1)^{i+j} w([xi,xj], x0..^xi..^xj..xk)
Tensor ceDifferential(const Tensor& form, const LieAlgebra& alg);
Tensor zeroThreeForm(std::size_t n);

struct Frame {
  Matrix v;  // columns are the orthonormal vectors
  std::vector<double> eps;
};
// Eigen-based; positive signs first, except n = 3 with one positive sign,
// where the pair of negatives comes first so that eps1 = eps2 = -eps3.
Frame orthonormalize(const Metric& g);

struct AdaptedBasis {
  std::size_t n = 0;
  Matrix g;                 // metric in the original coordinates
  Matrix v;                 // frame
  std::vector<double> eps;  // g(v_a, v_a)
  std::vector<double> eta;  // pairing on E: (eps, -eps)
  Tensor kappaFrame;        // [v_a, v_b] = kappaFrame(a,b,c) v_c
  Tensor kappaOrtho;        // kappa_abc = g([v_a, v_b], v_c)
  Tensor HOrtho;            // H(v_a, v_b, v_c)
};

AdaptedBasis adaptedBasis(const LieAlgebra& alg, const Metric& g, const Tensor& H);
AdaptedBasis adaptedBasisFromFrame(const LieAlgebra& alg, const Metric& g, const Tensor& H,
                                   const Frame& frame);
// Frame-level constructor: the frame is the coordinate basis, g = diag(eps).
AdaptedBasis adaptedBasisOrthonormal(const LieAlgebra& alg, const std::vector<double>& eps,
                                     const Tensor& H);

// i' = i - n on E- indices, identity on E+.
inline std::size_t primed(std::size_t A, std::size_t n) { return A >= n ? A - n : A; }

struct GeneralizedMetricBlocks {
  Matrix h;      // G restricted to g x g, times 2
  Matrix A;      // lower-left block, times 2
  Matrix gamma;  // G restricted to g* x g*, times 2
  Matrix beta;   // A = -g^{-1} beta
};

struct BFieldNormalForm {
  Metric metric;
  GeneralizedMetricBlocks blocks;
  Matrix phi;            // X + xi -> X + xi - beta X
  std::optional<Tensor> dBeta;  // d of twoFormOf(beta), when an algebra was supplied
};

// 2n x 2n matrix of G(X+xi, Y+eta) on coordinates (X; xi).
Matrix generalizedMetricOf(const Matrix& g, const Matrix& beta);
Matrix generalizedMetricEndomorphism(const Matrix& G);
BFieldNormalForm bFieldNormalForm(const Matrix& G, const LieAlgebra* alg = nullptr);
// The two-form b with b(X, Y) = (beta X)(Y); phi maps the H-bracket to the
// (H + db)-bracket.
Tensor twoFormOf(const Matrix& beta);

}  // namespace gencurv
