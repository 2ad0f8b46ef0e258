#pragma once

#include <map>
#include <string>
#include <vector>

#include "gencurv/curvature.hpp"

namespace gencurv {

// Structure constants in an oriented orthonormal frame with signs eps.
//   Diagonal:     coeffs (a1, a2, a3), [v_a, v_b] = a_c eps_c v_c for cyclic (a, b, c)
//   LMatrix:      coeffs are L row by row, [u, v] = L(u x v)
//   NondegKernel: coeffs (l, m, n, r), [v3, v1] = 0, [v2, v1] = e1 l v1 + e3 m v3,
//                 [v2, v3] = e1 n v1 + e3 r v3
//   DegKernel:    coeffs (l, m, n, r), [v1, v2] = [v3, v1] = e1 l v1 + e2 m v2 - e3 m v3,
//                 [v2, v3] = e1 n v1 + e2 r v2 - e3 r v3
enum class StructureKind { Diagonal, LMatrix, NondegKernel, DegKernel };

struct RawStructure {
  StructureKind kind = StructureKind::Diagonal;
  std::vector<double> coeffs;
  double h = 0.0;  // H = h vol_g
  std::vector<double> eps;
  Divergence delta;
};

LieAlgebra structureAlgebra(const RawStructure& raw);

using Params = std::map<std::string, double>;

struct SolutionFamilyInstance {
  std::string familyId;
  Params parameters;
  RawStructure raw;
  LieAlgebra alg;
  std::vector<double> eps;
  Metric metric;
  Tensor H;
  Divergence delta;
};

SolutionFamilyInstance realize(const std::string& id, const Params& params, const RawStructure& raw);

// Row identifiers look like t1-so3 or t2-r3l-h; knownFamilies lists them in
// table order. Missing or out-of-range parameters throw InvalidInputError.
SolutionFamilyInstance solutionFamily(const std::string& familyId, const Params& params);
const std::vector<std::string>& knownFamilies();
// The parameter names a family reads, with defaults where one exists.
std::vector<std::string> familyParameterNames(const std::string& familyId);

AdaptedBasis adaptedBasisOf(const SolutionFamilyInstance& inst);
EinsteinVerdict einsteinOf(const SolutionFamilyInstance& inst);
double einsteinResidual(const RawStructure& raw);

struct Perturbation {
  std::string label;  // which coefficient moved
  RawStructure raw;
  double residual = 0.0;
};
// Every single-coefficient move by 5% (or by 5% of the instance scale when the
// coefficient is zero) that keeps Jacobi; sorted by decreasing residual.
std::vector<Perturbation> perturbations(const SolutionFamilyInstance& inst);

}  // namespace gencurv
