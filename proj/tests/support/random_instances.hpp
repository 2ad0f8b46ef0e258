#pragma once

#include <random>

#include "gencurv/curvature.hpp"

namespace gencurv::testing {

struct RandomInstance {
  LieAlgebra alg;
  Metric metric;
  Tensor H;
  Divergence delta;
  AdaptedBasis basis;
};

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  int sign();
  Matrix randomMatrix(std::size_t r, std::size_t c, double lo, double hi);
  // Close to the identity so conditioning stays benign.
  Matrix randomInvertible(std::size_t n);
  Matrix randomMetric(std::size_t n, int positives);
  // Product of rotations and boosts preserving diag(eps), det = 1.
  Matrix randomIsometry(const std::vector<double>& eps);
  LieAlgebra randomLieAlgebra(std::size_t n);
  LieAlgebra randomLieAlgebra3(bool unimodular);
  Tensor randomThreeForm(std::size_t n);
  Tensor randomClosedThreeForm(const LieAlgebra& alg);
  Divergence randomDivergence(std::size_t n);
  RandomInstance next(std::size_t n, bool withH = true, bool withDelta = true);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gencurv::testing
