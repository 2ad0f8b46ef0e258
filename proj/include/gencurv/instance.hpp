#pragma once

#include <map>
#include <optional>
#include <string>

#include "gencurv/families.hpp"

namespace gencurv {

// Loaded instance file. In the file, indices are 1-based:
//   {"n": 3, "kappa": [[a,b,c,v]...], "g": [[...]...], "H": [[a,b,c,v]...], "delta": [2n values]}
// or {"family": "t1-so3", "parameters": {"h": 1}}.
// kappa is filled antisymmetrically in (a,b), H totally antisymmetrically.
struct Instance {
  LieAlgebra alg;
  Metric metric;
  Tensor H;
  Divergence delta;
  std::optional<std::string> family;
  Params parameters;
  std::string source;
  std::map<std::string, std::size_t> keyLines;  // for messages raised after loading
};

// Throws InvalidInputError with "source:line: message".
Instance parseInstance(const std::string& text, const std::string& source = "<input>");
Instance loadInstance(const std::string& path);
Instance instanceFromFamily(const SolutionFamilyInstance& inst);

struct InstanceCheck {
  double antisymmetry = 0.0;
  double jacobi = 0.0;
  double dH = 0.0;
  double metricSymmetry = 0.0;
  double metricDet = 0.0;
  bool valid = false;
  std::string problem;  // first failed check, empty when valid
};
InstanceCheck checkInstance(const Instance& inst);
// Throws InvalidInputError naming the first failed check.
void requireValid(const Instance& inst);

AdaptedBasis adaptedBasisOf(const Instance& inst);

// Canonical file text: sorted sparse entries, 12 significant digits.
std::string instanceToJson(const Instance& inst);
// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string instanceDigest(const Instance& inst);

}  // namespace gencurv
