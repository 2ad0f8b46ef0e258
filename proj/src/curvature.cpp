#include "gencurv/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace gencurv {

Curvature curvatureD0(const DorfmanTensor& dt) {
  const std::size_t n = dt.n, N = 2 * n;
  const Tensor& B = dt.B;
  Tensor Bu = raiseLast(B, dt.eta);
  Curvature R = Tensor::cube(N, 4);
  // R_ajcd, sum over l in E-
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t j = n; j < N; ++j)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          double s = 0.0;
          for (std::size_t l = n; l < N; ++l)
            s += 2.0 / 3.0 * Bu(a, j, l) * B(c, l, d) + Bu(j, c, l) * B(l, a, d) / 3.0 +
                 Bu(c, a, l) * B(l, j, d) / 3.0;
          R(a, j, c, d) = s;
          R(j, a, c, d) = -s;
        }
  // R_ibkl, sum over c in E+
  for (std::size_t i = n; i < N; ++i)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t k = n; k < N; ++k)
        for (std::size_t l = n; l < N; ++l) {
          double s = 0.0;
          for (std::size_t c = 0; c < n; ++c)
            s += 2.0 / 3.0 * Bu(i, b, c) * B(k, c, l) + Bu(b, k, c) * B(c, i, l) / 3.0 +
                 Bu(k, i, c) * B(c, b, l) / 3.0;
          R(i, b, k, l) = s;
          R(b, i, k, l) = -s;
        }
  return R;
}

Curvature curvatureOfConnection(const Connection& D, const DorfmanTensor& dt) {
  const std::size_t N = 2 * D.n;
  const Tensor& w = D.omega;
  Tensor wu = raiseLast(w, D.eta);
  Tensor Bu = raiseLast(dt.B, dt.eta);
  Curvature R = Tensor::cube(N, 4);
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B)
      for (std::size_t C = 0; C < N; ++C)
        for (std::size_t F = 0; F < N; ++F) {
          double s = 0.0;
          for (std::size_t E = 0; E < N; ++E)
            s += wu(B, C, E) * w(A, E, F) - wu(A, C, E) * w(B, E, F) - Bu(A, B, E) * w(E, C, F);
          R(A, B, C, F) = s;
        }
  return R;
}

DivergenceTerms divergenceTerms(const DorfmanTensor& dt, const Divergence& delta) {
  const std::size_t n = dt.n, N = 2 * n;
  if (delta.size() != N) throw DimensionError("divergence must have 2n components");
  DivergenceTerms t{Matrix(n, n), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a) {
      double p = 0.0, m = 0.0;
      for (std::size_t c = 0; c < n; ++c) p += dt.B(n + i, a, c) * dt.eta[c] * delta[c];
      for (std::size_t j = n; j < N; ++j) m += dt.B(a, n + i, j) * dt.eta[j] * delta[j];
      t.plus(i, a) = p;
      t.minus(a, i) = m;
    }
  return t;
}

GeneralizedRicci generalizedRicci(const DorfmanTensor& dt, const Divergence& delta) {
  const std::size_t n = dt.n, N = 2 * n;
  const Tensor& B = dt.B;
  const auto& eta = dt.eta;
  DivergenceTerms dtm = divergenceTerms(dt, delta);
  GeneralizedRicci r{Matrix(n, n), Matrix(n, n), delta};
  for (std::size_t i = n; i < N; ++i)
    for (std::size_t a = 0; a < n; ++a) {
      // B_bi^j B_aj^b
      double s = 0.0;
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t j = n; j < N; ++j) s += B(b, i, j) * eta[j] * B(a, j, b) * eta[b];
      r.plus(i - n, a) = s + dtm.plus(i - n, a);
      r.minus(a, i - n) = s + dtm.minus(a, i - n);
    }
  return r;
}

GeneralizedRicci ricciFromCurvature(const Curvature& R, std::size_t n, const std::vector<double>& eta) {
  const std::size_t N = 2 * n;
  GeneralizedRicci r{Matrix(n, n), Matrix(n, n), Divergence()};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a) {
      double p = 0.0, m = 0.0;
      for (std::size_t b = 0; b < n; ++b) p += eta[b] * R(b, n + i, a, b);
      for (std::size_t j = n; j < N; ++j) m += eta[j] * R(j, a, n + i, j);
      r.plus(i, a) = p;
      r.minus(a, i) = m;
    }
  return r;
}

EinsteinVerdict isGeneralizedEinstein(const GeneralizedRicci& ric, double tol) {
  double res = std::max(ric.plus.maxAbs(), ric.minus.maxAbs());
  return {res <= tol, res};
}

EinsteinVerdict isGeneralizedEinstein(const GeneralizedRicci& ric) {
  return isGeneralizedEinstein(ric, tolerance());
}

ClassicalRicci classicalRicci(const AdaptedBasis& basis) {
  const std::size_t n = basis.n;
  Tensor G = christoffel(basis);
  const Tensor& kf = basis.kappaFrame;
  const auto& eps = basis.eps;
  auto up = [&](std::size_t a, std::size_t b, std::size_t d) { return G(a, b, d) * eps[d]; };
  ClassicalRicci c{Matrix(n, n), std::vector<double>(n, 0.0), Matrix(n, n)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) c.tau[a] += kf(a, b, b);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0, t = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        for (std::size_t f = 0; f < n; ++f)
          s += up(a, b, d) * up(f, d, f) - up(f, b, d) * up(a, d, f) - kf(f, a, d) * up(d, b, f);
        t -= up(a, b, d) * c.tau[d];
      }
      c.ric(a, b) = s;
      c.nablaTau(a, b) = t;
    }
  return c;
}

Tensor leviCivitaCurvature(const AdaptedBasis& basis) {
  const std::size_t n = basis.n;
  Tensor G = christoffel(basis);
  const Tensor& kf = basis.kappaFrame;
  const auto& eps = basis.eps;
  auto up = [&](std::size_t a, std::size_t b, std::size_t d) { return G(a, b, d) * eps[d]; };
  Tensor R({n, n, n, n});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t f = 0; f < n; ++f) {
          double s = 0.0;
          for (std::size_t e = 0; e < n; ++e)
            s += up(b, c, e) * up(a, e, f) - up(a, c, e) * up(b, e, f) - kf(a, b, e) * up(e, c, f);
          R(a, b, c, f) = s * eps[f];
        }
  return R;
}

Matrix solitonResidual(const AdaptedBasis& basis) {
  ClassicalRicci c = classicalRicci(basis);
  return c.ric - c.nablaTau;
}

Rescaled rescale(const LieAlgebra& alg, const AdaptedBasis& basis, const Tensor& H,
                 const Divergence& delta, int eps, double mu) {
  if (!(mu > 0) || !std::isfinite(mu)) throw InvalidInputError("rescale: mu must be positive");
  if (eps != 1 && eps != -1) throw InvalidInputError("rescale: eps must be +1 or -1");
  double f = eps / (mu * mu);
  Metric m = makeMetric(basis.g * f);
  Tensor H2 = H * f;
  Divergence d2 = delta;
  for (double& x : d2) x *= mu;
  Frame fr{basis.v * mu, basis.eps};
  for (double& e : fr.eps) e *= eps;
  AdaptedBasis b2 = adaptedBasisFromFrame(alg, m, H2, fr);
  return Rescaled{m, H2, d2, b2};
}

}  // namespace gencurv
