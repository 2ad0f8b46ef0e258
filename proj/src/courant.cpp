#include "gencurv/courant.hpp"

#include <algorithm>
#include <cmath>

namespace gencurv {

GeneralizedVector dorfmanBracket(const GeneralizedVector& u, const GeneralizedVector& v,
                                 const LieAlgebra& alg, const Tensor& H) {
  const std::size_t n = alg.n;
  if (u.x.size() != n || u.xi.size() != n || v.x.size() != n || v.xi.size() != n)
    throw DimensionError("dorfmanBracket: component length");
  GeneralizedVector r{bracket(alg, u.x, v.x), std::vector<double>(n, 0.0)};
  const Tensor& k = alg.kappa;
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t d = 0; d < n; ++d) {
        // -eta([X, e_c])
        s -= v.xi[d] * u.x[a] * k(a, c, d);
        // -(i_Y d xi)(e_c) = xi([Y, e_c])
        s += u.xi[d] * v.x[a] * k(a, c, d);
      }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) s += H(a, b, c) * u.x[a] * v.x[b];
    r.xi[c] = s;
  }
  return r;
}

double scalarProduct(const GeneralizedVector& u, const GeneralizedVector& v) {
  if (u.x.size() != v.x.size() || u.xi.size() != v.xi.size() || u.x.size() != u.xi.size())
    throw DimensionError("scalarProduct: component length");
  double s = 0.0;
  for (std::size_t i = 0; i < u.x.size(); ++i) s += u.xi[i] * v.x[i] + v.xi[i] * u.x[i];
  return 0.5 * s;
}

std::vector<GeneralizedVector> adaptedVectors(const AdaptedBasis& basis) {
  const std::size_t n = basis.n;
  std::vector<GeneralizedVector> e(2 * n);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> va = basis.v.column(a);
    std::vector<double> gva = basis.g * va;
    std::vector<double> neg = gva;
    for (double& x : neg) x = -x;
    e[a] = {va, gva};
    e[n + a] = {va, neg};
  }
  return e;
}

std::vector<GeneralizedVector> adaptedVectorsInFrame(const AdaptedBasis& basis) {
  const std::size_t n = basis.n;
  std::vector<GeneralizedVector> e(2 * n);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> unit(n, 0.0), low(n, 0.0), neg(n, 0.0);
    unit[a] = 1.0;
    low[a] = basis.eps[a];
    neg[a] = -basis.eps[a];
    e[a] = {unit, low};
    e[n + a] = {unit, neg};
  }
  return e;
}

DorfmanTensor dorfmanTensor(const AdaptedBasis& basis) {
  const std::size_t n = basis.n, N = 2 * n;
  const Tensor& k = basis.kappaOrtho;
  const Tensor& H = basis.HOrtho;
  DorfmanTensor out{n, Tensor::cube(N, 3), basis.eta};
  Tensor& B = out.B;
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t Bi = 0; Bi < N; ++Bi)
      for (std::size_t C = 0; C < N; ++C) {
        int minus = (A >= n) + (Bi >= n) + (C >= n);
        std::size_t a = primed(A, n), b = primed(Bi, n), c = primed(C, n);
        double dk = k(a, b, c) + k(b, c, a) + k(c, a, b);
        double val = 0.0;
        if (minus == 0) {
          val = 0.5 * (H(a, b, c) + dk);
        } else if (minus == 3) {
          val = 0.5 * (H(a, b, c) - dk);
        } else if (minus == 2) {
          // rotate so the E+ index comes first: B_ajk, then undo by cyclic/skew symmetry
          std::size_t p, j, l;
          if (A < n) { p = a; j = b; l = c; }
          else if (Bi < n) { p = b; j = c; l = a; }  // B_{j a k} = B_{a k j}
          else { p = c; j = a; l = b; }             // B_{j k a} = B_{a j k}
          val = 0.5 * (H(p, j, l) - k(p, j, l) + k(j, l, p) - k(l, p, j));
        } else {
          // one E- index i: B_ibc
          std::size_t i, p, q;
          if (A >= n) { i = a; p = b; q = c; }
          else if (Bi >= n) { i = b; p = c; q = a; }
          else { i = c; p = a; q = b; }
          val = 0.5 * (H(i, p, q) + k(i, p, q) - k(p, q, i) + k(q, i, p));
        }
        B(A, Bi, C) = val;
      }
  return out;
}

DorfmanTensor dorfmanTensorDirect(const AdaptedBasis& basis, const LieAlgebra& alg,
                                  const Tensor& H) {
  const std::size_t n = basis.n, N = 2 * n;
  auto e = adaptedVectors(basis);
  DorfmanTensor out{n, Tensor::cube(N, 3), basis.eta};
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B) {
      GeneralizedVector br = dorfmanBracket(e[A], e[B], alg, H);
      for (std::size_t C = 0; C < N; ++C) out.B(A, B, C) = scalarProduct(br, e[C]);
    }
  return out;
}

Tensor raiseLast(const Tensor& B, const std::vector<double>& eta) {
  Tensor r = B;
  const std::size_t N = eta.size();
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t C = 0; C < N; ++C)
      for (std::size_t D = 0; D < N; ++D) r(A, C, D) = B(A, C, D) * eta[D];
  return r;
}

CourantReport checkCourantAxioms(const DorfmanTensor& dt) {
  const std::size_t N = 2 * dt.n;
  const Tensor& B = dt.B;
  Tensor Bu = raiseLast(B, dt.eta);
  CourantReport r;
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t Bi = 0; Bi < N; ++Bi)
      for (std::size_t C = 0; C < N; ++C) {
        double v = B(A, Bi, C);
        r.c2 = std::max(r.c2, std::abs(v + B(A, C, Bi)));
        r.c3 = std::max(r.c3, std::abs(v + B(Bi, A, C)));
        r.skew = std::max({r.skew, std::abs(v + B(A, C, Bi)), std::abs(v + B(Bi, A, C)),
                           std::abs(v - B(Bi, C, A))});
        for (std::size_t F = 0; F < N; ++F) {
          double s = 0.0;
          for (std::size_t D = 0; D < N; ++D)
            s += Bu(Bi, C, D) * Bu(A, D, F) - Bu(A, Bi, D) * Bu(D, C, F) - Bu(A, C, D) * Bu(Bi, D, F);
          r.c1 = std::max(r.c1, std::abs(s));
        }
      }
  r.ok = r.skew <= tolerance() && r.c1 <= tolerance();
  return r;
}

}  // namespace gencurv
