#include "random_instances.hpp"

#include <array>
#include <cmath>

namespace gencurv::testing {

double InstanceGenerator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

int InstanceGenerator::sign() { return uniform(0, 1) < 0.5 ? -1 : 1; }

Matrix InstanceGenerator::randomMatrix(std::size_t r, std::size_t c, double lo, double hi) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

Matrix InstanceGenerator::randomInvertible(std::size_t n) {
  for (;;) {
    Matrix P = Matrix::identity(n) + randomMatrix(n, n, -0.5, 0.5);
    if (std::abs(determinant(P)) > 0.4) return P;
  }
}

Matrix InstanceGenerator::randomMetric(std::size_t n, int positives) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (static_cast<int>(i) < positives ? 1.0 : -1.0) * uniform(0.5, 2.0);
  Matrix P = randomInvertible(n);
  Matrix g = P.transpose() * Matrix::diagonal(d) * P;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

Matrix InstanceGenerator::randomIsometry(const std::vector<double>& eps) {
  const std::size_t n = eps.size();
  Matrix Q = Matrix::identity(n);
  if (n < 2) return Q;
  for (int k = 0; k < 3 * static_cast<int>(n); ++k) {
    std::size_t i = static_cast<std::size_t>(uniform(0, n)), j = static_cast<std::size_t>(uniform(0, n));
    if (i == j || i >= n || j >= n) continue;
    double t = uniform(-1.2, 1.2);
    Matrix R = Matrix::identity(n);
    if (eps[i] == eps[j]) {
      R(i, i) = R(j, j) = std::cos(t);
      R(i, j) = -std::sin(t);
      R(j, i) = std::sin(t);
    } else {
      R(i, i) = R(j, j) = std::cosh(t);
      R(i, j) = R(j, i) = std::sinh(t);
    }
    Q = Q * R;
  }
  return Q;
}

LieAlgebra InstanceGenerator::randomLieAlgebra3(bool unimodular) {
  // C_ab^c = eps_abd N^dc + a_a delta_b^c - a_b delta_a^c with N a = 0
  Tensor eps = levi(3);
  Matrix N = randomMatrix(3, 3, -1.5, 1.5);
  N = N + N.transpose();
  std::vector<double> a(3, 0.0);
  if (!unimodular) {
    for (double& x : a) x = uniform(-1, 1);
    double aa = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
    Matrix P = Matrix::identity(3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) P(i, j) -= a[i] * a[j] / aa;
    N = P * N * P;
  }
  // occasionally drop rank to reach the solvable classes
  int drop = static_cast<int>(uniform(0, 3));
  if (unimodular && drop > 0) {
    SymEigen es = symmetricEigen(N);
    for (int k = 0; k < drop; ++k) es.values[k] = 0.0;
    N = es.vectors * Matrix::diagonal(es.values) * es.vectors.transpose();
  }
  LieAlgebra alg = makeLieAlgebra(3);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q)
      for (std::size_t c = 0; c < 3; ++c) {
        double v = 0.0;
        for (std::size_t d = 0; d < 3; ++d) v += eps(p, q, d) * N(d, c);
        if (q == c) v += a[p];
        if (p == c) v -= a[q];
        alg.kappa(p, q, c) = v;
      }
  return changeBasis(alg, randomInvertible(3));
}

LieAlgebra InstanceGenerator::randomLieAlgebra(std::size_t n) {
  LieAlgebra alg = makeLieAlgebra(n);
  if (n == 1) return alg;
  if (n == 2) {
    for (std::size_t c = 0; c < 2; ++c) {
      double v = uniform(-1.5, 1.5);
      alg.kappa(0, 1, c) = v;
      alg.kappa(1, 0, c) = -v;
    }
    return alg;
  }
  if (n == 3) return randomLieAlgebra3(uniform(0, 1) < 0.5);
  // n >= 4: a 3D algebra plus an abelian summand, or R acting on R^{n-1}
  if (uniform(0, 1) < 0.5) {
    LieAlgebra small = randomLieAlgebra3(uniform(0, 1) < 0.5);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t c = 0; c < 3; ++c) alg.kappa(a, b, c) = small.kappa(a, b, c);
  } else {
    Matrix A = randomMatrix(n - 1, n - 1, -1, 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; j < n; ++j) {
        alg.kappa(0, i, j) = A(j - 1, i - 1);
        alg.kappa(i, 0, j) = -A(j - 1, i - 1);
      }
  }
  return changeBasis(alg, randomInvertible(n));
}

Tensor InstanceGenerator::randomThreeForm(std::size_t n) {
  Tensor H = Tensor::cube(n, 3);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        double v = uniform(-1, 1);
        H(a, b, c) = H(b, c, a) = H(c, a, b) = v;
        H(b, a, c) = H(a, c, b) = H(c, b, a) = -v;
      }
  return H;
}

Tensor InstanceGenerator::randomClosedThreeForm(const LieAlgebra& alg) {
  const std::size_t n = alg.n;
  if (n < 3) return Tensor::cube(n, 3);
  if (n == 3) return randomThreeForm(3);
  std::vector<std::array<std::size_t, 3>> tri;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) tri.push_back({a, b, c});
  auto basisForm = [&](std::size_t k) {
    Tensor H = Tensor::cube(n, 3);
    auto [a, b, c] = tri[k];
    H(a, b, c) = H(b, c, a) = H(c, a, b) = 1.0;
    H(b, a, c) = H(a, c, b) = H(c, b, a) = -1.0;
    return H;
  };
  std::vector<Tensor> dk;
  for (std::size_t k = 0; k < tri.size(); ++k) dk.push_back(ceDifferential(basisForm(k), alg));
  Matrix D(dk[0].size(), tri.size());
  for (std::size_t k = 0; k < tri.size(); ++k)
    for (std::size_t r = 0; r < dk[k].size(); ++r) D(r, k) = dk[k].data()[r];
  Matrix ker = nullspace(D, 1e-12);
  Tensor H = Tensor::cube(n, 3);
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    double w = uniform(-1, 1);
    for (std::size_t k = 0; k < tri.size(); ++k)
      if (ker(k, j) != 0.0) H = H + basisForm(k) * (w * ker(k, j));
  }
  // keep entries O(1)
  double m = H.maxAbs();
  if (m > 1.0) H = H * (1.0 / m);
  return H;
}

Divergence InstanceGenerator::randomDivergence(std::size_t n) {
  Divergence d(2 * n);
  for (double& x : d) x = uniform(-1, 1);
  return d;
}

RandomInstance InstanceGenerator::next(std::size_t n, bool withH, bool withDelta) {
  RandomInstance r{randomLieAlgebra(n), makeMetric(randomMetric(n, static_cast<int>(uniform(0, n + 1)))),
                   Tensor::cube(n, 3), Divergence(2 * n, 0.0), {}};
  if (withH) r.H = randomClosedThreeForm(r.alg);
  if (withDelta) r.delta = randomDivergence(n);
  r.basis = adaptedBasis(r.alg, r.metric, r.H);
  return r;
}

}  // namespace gencurv::testing
