#include "gencurv/connections.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gencurv {

Connection canonicalConnection(const DorfmanTensor& dt) {
  const std::size_t n = dt.n, N = 2 * n;
  Connection D{n, Tensor::cube(N, 3), dt.eta};
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B)
      for (std::size_t C = 0; C < N; ++C) {
        bool a = A < n, b = B < n, c = C < n;
        if (b != c) continue;
        D.omega(A, B, C) = (a == b) ? dt.B(A, B, C) / 3.0 : dt.B(A, B, C);
      }
  return D;
}

Tensor delOperator(const Tensor& w) {
  const std::size_t N = w.shape()[0];
  Tensor r = Tensor::cube(N, 3);
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B)
      for (std::size_t C = 0; C < N; ++C) r(A, B, C) = w(A, B, C) + w(B, C, A) + w(C, A, B);
  return r;
}

Tensor torsion(const Connection& D, const DorfmanTensor& B) {
  return delOperator(D.omega) - B.B;
}

Divergence divergence(const Connection& D) {
  const std::size_t N = 2 * D.n;
  Divergence d(N, 0.0);
  for (std::size_t B = 0; B < N; ++B)
    for (std::size_t A = 0; A < N; ++A) d[B] += D.eta[A] * D.omega(A, B, A);
  return d;
}

MetricityReport metricity(const Connection& D) {
  const std::size_t n = D.n, N = 2 * n;
  MetricityReport r;
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B)
      for (std::size_t C = 0; C < N; ++C) {
        r.pairing = std::max(r.pairing, std::abs(D.omega(A, B, C) + D.omega(A, C, B)));
        if ((B < n) != (C < n)) r.blocks = std::max(r.blocks, std::abs(D.omega(A, B, C)));
      }
  return r;
}

Tensor squareTimes(std::size_t N, std::size_t P, std::size_t Q) {
  Tensor s = Tensor::cube(N, 3);
  s(P, P, Q) = 1.0;
  return s;
}

Tensor altMap(const Tensor& sigma, std::size_t n) {
  const std::size_t N = 2 * n;
  if (sigma.shape() != std::vector<std::size_t>{N, N, N}) throw DimensionError("altMap: shape");
  bool plus = false, minus = false;
  const double tol = tolerance();
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B)
      for (std::size_t C = 0; C < N; ++C) {
        double v = sigma(A, B, C);
        if (std::abs(v - sigma(B, A, C)) > tol)
          throw InvalidInputError("altMap: input not symmetric in its first two slots");
        if (std::abs(v) <= tol) continue;
        int m = (A >= n) + (B >= n) + (C >= n);
        if (m == 0) plus = true;
        else if (m == 3) minus = true;
        else throw InvalidInputError("altMap: input mixes the two blocks");
      }
  if (plus && minus) throw InvalidInputError("altMap: input mixes the two blocks");
  Tensor S = Tensor::cube(N, 3);
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B)
      for (std::size_t C = 0; C < N; ++C) S(A, B, C) = sigma(A, B, C) - sigma(A, C, B);
  return S;
}

Tensor divergenceCorrection(std::size_t n, const std::vector<double>& eta, const Divergence& delta) {
  if (n < 2) throw UnsupportedError("prescribed divergence needs dim >= 2 (divergence vanishes in dim 1)");
  const std::size_t N = 2 * n;
  if (delta.size() != N) throw DimensionError("divergence must have 2n components");
  // In each block the pivot P is the block's first index, or its second
  // when Q is the first: trace of -d_Q eta_PP alt((e^P)^2 e^Q) is d_Q e^Q.
  Tensor S = Tensor::cube(N, 3);
  for (std::size_t Q = 0; Q < N; ++Q) {
    if (delta[Q] == 0.0) continue;
    std::size_t first = Q < n ? 0 : n;
    std::size_t P = (Q == first) ? first + 1 : first;
    S = S - altMap(squareTimes(N, P, Q), n) * (delta[Q] * eta[P]);
  }
  return S;
}

Connection prescribedDivergenceConnection(const DorfmanTensor& B, const Divergence& delta) {
  Connection D = canonicalConnection(B);
  D.omega = D.omega + divergenceCorrection(B.n, B.eta, delta);
  return D;
}

Matrix delMatrix(std::size_t n) {
  std::vector<std::array<std::size_t, 2>> pairs;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = b + 1; c < n; ++c) pairs.push_back({b, c});
  std::vector<std::array<std::size_t, 3>> triples;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) triples.push_back({a, b, c});
  Matrix m(triples.size(), n * pairs.size());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      Tensor S = Tensor::cube(n, 3);
      S(a, pairs[p][0], pairs[p][1]) = 1.0;
      S(a, pairs[p][1], pairs[p][0]) = -1.0;
      Tensor d = delOperator(S);
      for (std::size_t t = 0; t < triples.size(); ++t)
        m(t, a * pairs.size() + p) = d(triples[t][0], triples[t][1], triples[t][2]);
    }
  return m;
}

Matrix altMatrix(std::size_t n) {
  std::vector<std::array<std::size_t, 2>> sym, skew;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) sym.push_back({a, b});
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = b + 1; c < n; ++c) skew.push_back({b, c});
  Matrix m(n * skew.size(), sym.size() * n);
  for (std::size_t s = 0; s < sym.size(); ++s)
    for (std::size_t c = 0; c < n; ++c) {
      Tensor sig = Tensor::cube(n, 3);
      sig(sym[s][0], sym[s][1], c) = 1.0;
      sig(sym[s][1], sym[s][0], c) = 1.0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t k = 0; k < skew.size(); ++k) {
          auto [b, cc] = skew[k];
          m(a * skew.size() + k, s * n + c) = sig(a, b, cc) - sig(a, cc, b);
        }
    }
  return m;
}

Divergence riemannianDivergence(const AdaptedBasis& basis) {
  const std::size_t n = basis.n;
  Divergence d(2 * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    double tau = 0.0;
    for (std::size_t b = 0; b < n; ++b) tau += basis.kappaFrame(a, b, b);
    d[a] = d[n + a] = -tau;
  }
  return d;
}

Tensor christoffel(const AdaptedBasis& basis) {
  const std::size_t n = basis.n;
  const Tensor& k = basis.kappaOrtho;
  Tensor G = Tensor::cube(n, 3);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) G(a, b, c) = 0.5 * (k(a, b, c) - k(b, c, a) + k(c, a, b));
  return G;
}

Divergence divergenceFromChristoffel(const AdaptedBasis& basis) {
  const std::size_t n = basis.n;
  Tensor G = christoffel(basis);
  Divergence d(2 * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += basis.eps[a] * G(a, c, a);
    d[c] = d[n + c] = s;
  }
  return d;
}

}  // namespace gencurv
