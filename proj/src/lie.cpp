#include "gencurv/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gencurv {

LieAlgebra makeLieAlgebra(std::size_t n) {
  if (n == 0) throw InvalidInputError("Lie algebra dimension must be positive");
  return LieAlgebra{n, Tensor::cube(n, 3)};
}

LieAlgebra abelian(std::size_t n) { return makeLieAlgebra(n); }

LieValidity validateLieAlgebra(const LieAlgebra& alg) {
  const std::size_t n = alg.n;
  const Tensor& k = alg.kappa;
  if (k.shape() != std::vector<std::size_t>{n, n, n})
    throw DimensionError("structure constants must have shape n x n x n");
  LieValidity r;
  for (double x : k.data())
    if (!std::isfinite(x)) {
      r.antisymmetry = r.jacobi = INFINITY;
      return r;
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        r.antisymmetry = std::max(r.antisymmetry, std::abs(k(a, b, c) + k(b, a, c)));
  // [[a,b],c] + [[b,c],a] + [[c,a],b]
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e) {
          double s = 0.0;
          for (std::size_t d = 0; d < n; ++d)
            s += k(a, b, d) * k(d, c, e) + k(b, c, d) * k(d, a, e) + k(c, a, d) * k(d, b, e);
          r.jacobi = std::max(r.jacobi, std::abs(s));
        }
  r.valid = r.antisymmetry <= tolerance() && r.jacobi <= tolerance();
  return r;
}

std::vector<double> bracket(const LieAlgebra& alg, const std::vector<double>& x,
                            const std::vector<double>& y) {
  const std::size_t n = alg.n;
  if (x.size() != n || y.size() != n) throw DimensionError("bracket: vector length");
  std::vector<double> r(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    if (x[a] == 0.0) continue;
    for (std::size_t b = 0; b < n; ++b) {
      double w = x[a] * y[b];
      if (w == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) r[c] += w * alg.kappa(a, b, c);
    }
  }
  return r;
}

Matrix adMatrix(const LieAlgebra& alg, std::size_t a) {
  Matrix m(alg.n, alg.n);
  for (std::size_t b = 0; b < alg.n; ++b)
    for (std::size_t c = 0; c < alg.n; ++c) m(c, b) = alg.kappa(a, b, c);
  return m;
}

std::vector<double> traceForm(const LieAlgebra& alg) {
  std::vector<double> t(alg.n, 0.0);
  for (std::size_t a = 0; a < alg.n; ++a)
    for (std::size_t b = 0; b < alg.n; ++b) t[a] += alg.kappa(a, b, b);
  return t;
}

Matrix killingForm(const LieAlgebra& alg) {
  Matrix k(alg.n, alg.n);
  std::vector<Matrix> ad;
  for (std::size_t a = 0; a < alg.n; ++a) ad.push_back(adMatrix(alg, a));
  for (std::size_t a = 0; a < alg.n; ++a)
    for (std::size_t b = a; b < alg.n; ++b) k(a, b) = k(b, a) = trace(ad[a] * ad[b]);
  return k;
}

LieAlgebra changeBasis(const LieAlgebra& alg, const Matrix& P) {
  Matrix Pt = P.transpose();
  Tensor t = applyOnAxis(alg.kappa, Pt, 0);
  t = applyOnAxis(t, Pt, 1);
  t = applyOnAxis(t, inverse(P), 2);
  return LieAlgebra{alg.n, t};
}

Tensor changeBasisCovariant(const Tensor& form, const Matrix& P) {
  Matrix Pt = P.transpose();
  Tensor t = form;
  for (std::size_t ax = 0; ax < form.rank(); ++ax) t = applyOnAxis(t, Pt, ax);
  return t;
}

Metric makeMetric(const Matrix& g) {
  Metric m{BilinearForm(g), 0, 0};
  if (std::abs(determinant(g)) <= tolerance()) throw SingularityError("metric is degenerate");
  for (double ev : symmetricEigen(g).values) (ev > 0 ? m.p : m.q)++;
  return m;
}

bool isAlternating(const Tensor& t, double tol) {
  return maxAbsDiff(antisymmetrize(t), t) <= tol;
}

Tensor ceDifferential(const Tensor& form, const LieAlgebra& alg) {
  const std::size_t n = alg.n, k = form.rank();
  for (auto d : form.shape())
    if (d != n) throw DimensionError("ceDifferential: form dimension differs from algebra");
  if (k >= 2 && !isAlternating(form, tolerance()))
    throw InvalidInputError("ceDifferential: form is not alternating");
  Tensor out = Tensor::cube(n, k + 1);
  if (k == 0) return out;
  std::vector<std::size_t> idx(k + 1, 0), sub(k);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t s = k + 1; s-- > 0;) {
      idx[s] = rem % n;
      rem /= n;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = i + 1; j <= k; ++j) {
        double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        std::size_t pos = 1;
        for (std::size_t s = 0; s <= k; ++s)
          if (s != i && s != j) sub[pos++] = idx[s];
        for (std::size_t c = 0; c < n; ++c) {
          double kc = alg.kappa(idx[i], idx[j], c);
          if (kc == 0.0) continue;
          sub[0] = c;
          acc += sign * kc * form.at(sub);
        }
      }
    out.data()[flat] = acc;
  }
  return out;
}

Tensor zeroThreeForm(std::size_t n) { return Tensor::cube(n, 3); }

Frame orthonormalize(const Metric& metric) {
  const Matrix& g = metric.g.matrix();
  const std::size_t n = g.rows();
  if (std::abs(determinant(g)) <= tolerance()) throw SingularityError("metric is degenerate");
  SymEigen es = symmetricEigen(g);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  int pos = 0;
  for (double ev : es.values) pos += ev > 0;
  bool negativesFirst = (n == 3 && pos == 1);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    bool pi = es.values[i] > 0, pj = es.values[j] > 0;
    if (pi != pj) return negativesFirst ? !pi : pi;
    return std::abs(es.values[i]) > std::abs(es.values[j]);
  });
  Frame f{Matrix(n, n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t src = order[k];
    double lam = es.values[src];
    std::vector<double> u = es.vectors.column(src);
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(u[i]) > std::abs(u[big]) + 1e-12) big = i;
    double s = (u[big] < 0 ? -1.0 : 1.0) / std::sqrt(std::abs(lam));
    for (double& x : u) x *= s;
    f.v.setColumn(k, u);
    f.eps[k] = lam > 0 ? 1.0 : -1.0;
  }
  if (determinant(f.v) < 0)
    for (std::size_t i = 0; i < n; ++i) f.v(i, n - 1) = -f.v(i, n - 1);
  return f;
}

AdaptedBasis adaptedBasisFromFrame(const LieAlgebra& alg, const Metric& metric, const Tensor& H,
                                   const Frame& frame) {
  const std::size_t n = alg.n;
  const Matrix& g = metric.g.matrix();
  if (g.rows() != n || frame.v.rows() != n || frame.v.cols() != n || frame.eps.size() != n)
    throw DimensionError("adapted basis: dimension mismatch");
  if (H.shape() != std::vector<std::size_t>{n, n, n})
    throw DimensionError("adapted basis: three-form has wrong shape");
  Matrix gram = frame.v.transpose() * g * frame.v;
  double scale = std::max(1.0, g.maxAbs());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double want = a == b ? frame.eps[a] : 0.0;
      if (std::abs(gram(a, b) - want) > 1e3 * tolerance() * scale)
        throw InvalidInputError("frame is not orthonormal for g");
    }
  AdaptedBasis ab;
  ab.n = n;
  ab.g = g;
  ab.v = frame.v;
  ab.eps = frame.eps;
  ab.eta.resize(2 * n);
  for (std::size_t a = 0; a < n; ++a) {
    ab.eta[a] = frame.eps[a];
    ab.eta[n + a] = -frame.eps[a];
  }
  ab.kappaFrame = changeBasis(alg, frame.v).kappa;
  ab.kappaOrtho = ab.kappaFrame;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) ab.kappaOrtho(a, b, c) *= frame.eps[c];
  ab.HOrtho = changeBasisCovariant(H, frame.v);
  return ab;
}

AdaptedBasis adaptedBasis(const LieAlgebra& alg, const Metric& g, const Tensor& H) {
  return adaptedBasisFromFrame(alg, g, H, orthonormalize(g));
}

AdaptedBasis adaptedBasisOrthonormal(const LieAlgebra& alg, const std::vector<double>& eps,
                                     const Tensor& H) {
  Metric m = makeMetric(Matrix::diagonal(eps));
  return adaptedBasisFromFrame(alg, m, H, Frame{Matrix::identity(alg.n), eps});
}

Matrix generalizedMetricOf(const Matrix& g, const Matrix& beta) {
  const std::size_t n = g.rows();
  Matrix gi = inverse(g);
  Matrix phi = Matrix::identity(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) phi(n + i, j) = -beta(i, j);
  Matrix Gg(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Gg(i, j) = 0.5 * g(i, j);
      Gg(n + i, n + j) = 0.5 * gi(i, j);
    }
  Matrix G = phi.transpose() * Gg * phi;
  // exact symmetry for downstream checks
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < i; ++j) G(i, j) = G(j, i) = 0.5 * (G(i, j) + G(j, i));
  return G;
}

Matrix generalizedMetricEndomorphism(const Matrix& G) {
  // <End u, v> = G(u, v) with <,> = 1/2 [[0, I], [I, 0]]
  const std::size_t n = G.rows() / 2;
  Matrix sw(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) sw(i, n + i) = sw(n + i, i) = 2.0;
  return sw * G;
}

Tensor twoFormOf(const Matrix& beta) {
  // b(X, Y) = (beta X)(Y), so beta X = i_X b
  return fromMatrix(beta.transpose());
}

BFieldNormalForm bFieldNormalForm(const Matrix& G, const LieAlgebra* alg) {
  if (G.rows() != G.cols() || G.rows() % 2 != 0) throw DimensionError("generalized metric must be 2n x 2n");
  const std::size_t n = G.rows() / 2;
  double scale = std::max(1.0, G.maxAbs());
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(G(i, j) - G(j, i)) > tolerance() * scale)
        throw InvalidInputError("generalized metric is not symmetric");
  Matrix end = generalizedMetricEndomorphism(G);
  if (maxAbsDiff(end * end, Matrix::identity(2 * n)) > 1e3 * tolerance() * scale * scale)
    throw InvalidInputError("generalized metric endomorphism is not an involution");

  GeneralizedMetricBlocks bl{Matrix(n, n), Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bl.h(i, j) = 2.0 * G(i, j);
      bl.A(i, j) = 2.0 * G(n + i, j);
      bl.gamma(i, j) = 2.0 * G(n + i, n + j);
    }
  if (std::abs(determinant(bl.gamma)) <= tolerance())
    throw SingularityError("dual block of the generalized metric is degenerate");
  Matrix g = inverse(bl.gamma);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i) = 0.5 * (g(i, j) + g(j, i));
  Matrix beta = (g * bl.A) * -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    beta(i, i) = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      double s = 0.5 * (beta(i, j) - beta(j, i));
      beta(i, j) = s;
      beta(j, i) = -s;
    }
  }
  bl.beta = beta;

  BFieldNormalForm out{makeMetric(g), bl, Matrix::identity(2 * n), std::nullopt};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.phi(n + i, j) = -beta(i, j);
  if (alg) {
    if (alg->n != n) throw DimensionError("algebra dimension differs from generalized metric");
    out.dBeta = ceDifferential(twoFormOf(beta), *alg);
  }
  return out;
}

}  // namespace gencurv
