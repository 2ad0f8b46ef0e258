#include "gencurv/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "gencurv/dim3.hpp"

namespace gencurv {

namespace {

void setBracket(LieAlgebra& g, std::size_t a, std::size_t b, std::size_t c, double v) {
  g.kappa(a, b, c) = v;
  g.kappa(b, a, c) = -v;
}

using Builder = std::function<RawStructure(const Params&)>;

struct ParamSpec {
  std::string name;
  std::optional<double> fallback;
};

struct FamilySpec {
  std::string id;
  std::vector<ParamSpec> params;
  Builder build;
};

double need(const Params& p, const std::string& k) {
  auto it = p.find(k);
  if (it == p.end()) throw InvalidInputError("missing parameter " + k);
  if (!std::isfinite(it->second)) throw InvalidInputError("parameter " + k + " is not finite");
  return it->second;
}

double sign(const Params& p, const std::string& k) {
  double v = need(p, k);
  if (v != 1.0 && v != -1.0) throw InvalidInputError("parameter " + k + " must be +1 or -1");
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInputError(what);
}

bool nonzero(double x) { return std::abs(x) > tolerance(); }

std::vector<double> indefiniteSigns(double s) { return {s, s, -s}; }

RawStructure diagonal(double a1, double a2, double a3, double h, std::vector<double> eps, Divergence d) {
  return {StructureKind::Diagonal, {a1, a2, a3}, h, std::move(eps), std::move(d)};
}

RawStructure fromL(const Matrix& L, std::vector<double> eps, Divergence d) {
  return {StructureKind::LMatrix, L.data(), 0.0, std::move(eps), std::move(d)};
}

RawStructure nondeg(double l, double m, double n, double r, double h, double s, Divergence d) {
  return {StructureKind::NondegKernel, {l, m, n, r}, h, indefiniteSigns(s), std::move(d)};
}

RawStructure deg(double l, double m, double n, double r, double s, Divergence d) {
  return {StructureKind::DegKernel, {l, m, n, r}, 0.0, indefiniteSigns(s), std::move(d)};
}

Divergence zeroDelta() { return Divergence(6, 0.0); }

// so(3) and so(2,1): a1 = a2 = a3 = sign * h. With a = h the E+ half of the
// divergence vanishes, with a = -h the E- half.
RawStructure simpleType(const Params& p, bool definite, bool withDelta) {
  double h = need(p, "h"), sg = sign(p, "sign"), s = sign(p, "s");
  require(nonzero(h), "h must be nonzero");
  Divergence d = zeroDelta();
  if (withDelta) {
    std::size_t off = sg > 0 ? 3 : 0;
    d[off] = need(p, "x1");
    d[off + 1] = need(p, "x2");
    d[off + 2] = need(p, "x3");
  }
  std::vector<double> eps = definite ? std::vector<double>{s, s, s} : indefiniteSigns(s);
  double a = sg * h;
  return diagonal(a, a, a, h, eps, d);
}

// e(2) / e(1,1): a_sigma(1) = a_sigma(2) = a, h = a_sigma(3) = 0.
RawStructure metabelianType(const Params& p, bool euclideanPlane, bool withDelta) {
  double a = need(p, "a"), s = sign(p, "s");
  double sg = need(p, "sigma");
  bool definite = need(p, "definite") != 0.0;
  require(nonzero(a), "a must be nonzero");
  require(sg == 1.0 || sg == 2.0 || sg == 3.0, "sigma must be 1, 2 or 3");
  std::size_t k = static_cast<std::size_t>(sg) - 1;
  std::size_t i1 = k, i2 = (k + 1) % 3, i3 = (k + 2) % 3;
  std::vector<double> eps = definite ? std::vector<double>{s, s, s} : indefiniteSigns(s);
  bool planeDefinite = eps[i1] == eps[i2];
  require(planeDefinite == euclideanPlane,
          euclideanPlane ? "sigma gives g indefinite on [g,g]" : "sigma gives g definite on [g,g]");
  std::vector<double> al(3, 0.0);
  al[i1] = al[i2] = a;
  Divergence d = zeroDelta();
  if (withDelta) {
    d[i3] = need(p, "x1");
    d[i3 + 3] = need(p, "x2");
  }
  return diagonal(al[0], al[1], al[2], 0.0, eps, d);
}

RawStructure heisType(const Params& p, bool withDelta) {
  double form = need(p, "form"), c = need(p, "c"), s = sign(p, "s");
  require(form == 3.0 || form == 4.0, "form must be 3 or 4");
  require(c > 0, "c must be positive");
  Matrix L = lNormalFormMatrix({form == 3.0 ? "L3" : "L4", {0.0, 0.0}}) * c;
  Divergence d = zeroDelta();
  if (withDelta) {
    d[1] = d[2] = need(p, "p");
    d[4] = d[5] = need(p, "q");
  }
  return fromL(L, indefiniteSigns(s), d);
}

RawStructure r31PrimeType(const Params& p) {
  double th = need(p, "theta"), s = sign(p, "s");
  require(th > 0, "theta must be positive");
  auto e = indefiniteSigns(s);
  return nondeg(e[0] * th, -e[2] * th, e[0] * th, e[2] * th, 0.0, s, zeroDelta());
}

const std::vector<FamilySpec>& specs() {
  static const std::vector<FamilySpec> all = [] {
    std::vector<FamilySpec> v;
    // Table 1: divergence-free.
    v.push_back({"t1-abelian", {{"s", 1.0}, {"definite", 1.0}}, [](const Params& p) {
                   double s = sign(p, "s");
                   bool def = need(p, "definite") != 0.0;
                   return diagonal(0, 0, 0, 0, def ? std::vector<double>{s, s, s} : indefiniteSigns(s), zeroDelta());
                 }});
    v.push_back({"t1-so3", {{"h", {}}, {"sign", 1.0}, {"s", 1.0}},
                 [](const Params& p) { return simpleType(p, true, false); }});
    v.push_back({"t1-so21", {{"h", {}}, {"sign", 1.0}, {"s", 1.0}},
                 [](const Params& p) { return simpleType(p, false, false); }});
    v.push_back({"t1-e2", {{"a", {}}, {"sigma", 1.0}, {"definite", 1.0}, {"s", 1.0}},
                 [](const Params& p) { return metabelianType(p, true, false); }});
    v.push_back({"t1-e11", {{"a", {}}, {"sigma", 2.0}, {"definite", 0.0}, {"s", 1.0}},
                 [](const Params& p) { return metabelianType(p, false, false); }});
    v.push_back({"t1-heis", {{"form", 3.0}, {"c", 1.0}, {"s", 1.0}},
                 [](const Params& p) { return heisType(p, false); }});
    v.push_back({"t1-r31prime", {{"theta", {}}, {"s", 1.0}}, r31PrimeType});

    // Table 2: arbitrary divergence.
    v.push_back({"t2-abelian",
                 {{"s", 1.0}, {"definite", 1.0}, {"d1", 0.0}, {"d2", 0.0}, {"d3", 0.0}, {"d4", 0.0}, {"d5", 0.0},
                  {"d6", 0.0}},
                 [](const Params& p) {
                   double s = sign(p, "s");
                   bool def = need(p, "definite") != 0.0;
                   Divergence d(6);
                   for (int i = 0; i < 6; ++i) d[i] = need(p, "d" + std::to_string(i + 1));
                   return diagonal(0, 0, 0, 0, def ? std::vector<double>{s, s, s} : indefiniteSigns(s), d);
                 }});
    v.push_back({"t2-so3", {{"h", {}}, {"sign", 1.0}, {"s", 1.0}, {"x1", 0.0}, {"x2", 0.0}, {"x3", 0.0}},
                 [](const Params& p) { return simpleType(p, true, true); }});
    v.push_back({"t2-so21", {{"h", {}}, {"sign", 1.0}, {"s", 1.0}, {"x1", 0.0}, {"x2", 0.0}, {"x3", 0.0}},
                 [](const Params& p) { return simpleType(p, false, true); }});
    v.push_back({"t2-e2", {{"a", {}}, {"sigma", 1.0}, {"definite", 1.0}, {"s", 1.0}, {"x1", 0.0}, {"x2", 0.0}},
                 [](const Params& p) { return metabelianType(p, true, true); }});
    v.push_back({"t2-e11", {{"a", {}}, {"sigma", 2.0}, {"definite", 0.0}, {"s", 1.0}, {"x1", 0.0}, {"x2", 0.0}},
                 [](const Params& p) { return metabelianType(p, false, true); }});
    v.push_back({"t2-heis", {{"form", 3.0}, {"c", 1.0}, {"s", 1.0}, {"p", 0.0}, {"q", 0.0}},
                 [](const Params& p) { return heisType(p, true); }});
    // L3(a, 0) / L4(a, 0): d1 = d4 = -2 e1 a.
    v.push_back({"t2-e11-jordan", {{"form", 3.0}, {"alpha", {}}, {"s", 1.0}}, [](const Params& p) {
                   double form = need(p, "form"), a = need(p, "alpha"), s = sign(p, "s");
                   require(form == 3.0 || form == 4.0, "form must be 3 or 4");
                   require(nonzero(a), "alpha must be nonzero");
                   Divergence d = zeroDelta();
                   d[0] = d[3] = -2 * s * a;
                   return fromL(lNormalFormMatrix({form == 3.0 ? "L3" : "L4", {a, 0.0}}), indefiniteSigns(s), d);
                 }});
    // c L5(0): e1 d1 = -e3 d3 = e1 d4 = -e3 d6 = -sqrt2 c.
    v.push_back({"t2-e11-l5", {{"c", 1.0}, {"s", 1.0}}, [](const Params& p) {
                   double c = need(p, "c"), s = sign(p, "s");
                   require(c > 0, "c must be positive");
                   double x = -std::sqrt(2.0) * c * s;
                   Divergence d{x, 0.0, x, x, 0.0, x};
                   return fromL(lNormalFormMatrix({"L5", {0.0}}) * c, indefiniteSigns(s), d);
                 }});
    v.push_back({"t2-r31prime", {{"theta", {}}, {"s", 1.0}}, r31PrimeType});
    // m = e' l, n = e' r, h = hs e' (l - r). One half of the divergence carries a
    // free multiple t of (e' r, l) on slots (1, 3); the other half vanishes there.
    v.push_back({"t2-r2r-h", {{"lambda", {}}, {"rho", {}}, {"epsp", 1.0}, {"hsign", 1.0}, {"t", 0.0}, {"s", 1.0}},
                 [](const Params& p) {
                   double l = need(p, "lambda"), r = need(p, "rho"), ep = sign(p, "epsp"), hs = sign(p, "hsign");
                   double t = need(p, "t"), s = sign(p, "s");
                   require(nonzero(l - r), "lambda must differ from rho");
                   Divergence d = zeroDelta();
                   d[1] = d[4] = -s * (l - r);
                   std::size_t off = hs > 0 ? 0 : 3;
                   d[off] = t * ep * r;
                   d[off + 2] = t * l;
                   return nondeg(l, ep * l, ep * r, r, hs * ep * (l - r), s, d);
                 }});
    // r = -l, n = -m, h = +-2l.
    v.push_back({"t2-r3l-h", {{"lambda", {}}, {"mu", {}}, {"hsign", 1.0}, {"s", 1.0}}, [](const Params& p) {
                   double l = need(p, "lambda"), m = need(p, "mu"), hs = sign(p, "hsign"), s = sign(p, "s");
                   require(nonzero(l), "lambda must be nonzero");
                   require(nonzero(m), "mu must be nonzero");
                   require(nonzero(std::abs(l) - std::abs(m)), "|mu| = |lambda| gives r2 + R");
                   Divergence d = zeroDelta();
                   d[1] = d[4] = -2 * s * l;
                   return nondeg(l, m, -m, -l, hs * 2 * l, s, d);
                 }});
    v.push_back({"t2-r31-h", {{"lambda", {}}, {"hsign", 1.0}, {"s", 1.0}}, [](const Params& p) {
                   double l = need(p, "lambda"), hs = sign(p, "hsign"), s = sign(p, "s");
                   require(nonzero(l), "lambda must be nonzero");
                   Divergence d = zeroDelta();
                   d[1] = d[4] = -2 * s * l;
                   return nondeg(l, 0.0, 0.0, -l, hs * 2 * l, s, d);
                 }});
    // Degenerate kernel, n = h = 0, l = 0: d1, d4 free.
    v.push_back({"t2-r2r-deg", {{"mu", {}}, {"rho", {}}, {"d1", 0.0}, {"d4", 0.0}, {"s", 1.0}},
                 [](const Params& p) {
                   double m = need(p, "mu"), r = need(p, "rho"), s = sign(p, "s");
                   double d1 = need(p, "d1"), d4 = need(p, "d4");
                   require(nonzero(r), "rho must be nonzero");
                   Divergence d{d1, 0, 0, d4, 0, 0};
                   d[1] = -s * (r * r - s * m * d1) / r;
                   d[2] = -d[1];
                   d[4] = -s * (r * r - s * m * d4) / r;
                   d[5] = -d[4];
                   return deg(0.0, m, 0.0, r, s, d);
                 }});
    // The action on the kernel has eigenvalues -e1 l and e1 r, and the algebra
    // is unimodular when l = r. r = -l, m != 0: a Jordan block.
    v.push_back({"t2-r3-deg", {{"lambda", {}}, {"mu", {}}, {"s", 1.0}}, [](const Params& p) {
                   double l = need(p, "lambda"), m = need(p, "mu"), s = sign(p, "s");
                   require(nonzero(l), "lambda must be nonzero");
                   require(nonzero(m), "mu must be nonzero");
                   Divergence d = zeroDelta();
                   d[1] = d[4] = 2 * s * l;
                   d[2] = d[5] = -2 * s * l;
                   return deg(l, m, 0.0, -l, s, d);
                 }});
    v.push_back({"t2-r3l-deg", {{"lambda", {}}, {"rho", {}}, {"mu", 0.0}, {"s", 1.0}}, [](const Params& p) {
                   double l = need(p, "lambda"), r = need(p, "rho"), m = need(p, "mu"), s = sign(p, "s");
                   require(nonzero(l), "lambda must be nonzero");
                   require(nonzero(r), "rho must be nonzero");
                   require(nonzero(l - r), "lambda = rho is unimodular");
                   require(nonzero(l + r) || !nonzero(m), "rho = -lambda with mu != 0 gives r3");
                   Divergence d = zeroDelta();
                   d[1] = d[4] = -s * (l * l + r * r) / r;
                   d[2] = d[5] = -d[1];
                   return deg(l, m, 0.0, r, s, d);
                 }});
    return v;
  }();
  return all;
}

const FamilySpec& specOf(const std::string& id) {
  static const std::map<std::string, std::string> aliases{
      {"so(3)-type", "t1-so3"},
      {"nonunimod-divfree", "t1-r31prime"},
      {"heis-with-divergence", "t2-heis"},
      {"L5-divergence", "t2-e11-l5"}};
  std::string key = id;
  if (auto it = aliases.find(id); it != aliases.end()) key = it->second;
  for (const auto& s : specs())
    if (s.id == key) return s;
  throw InvalidInputError("unknown family " + id);
}

}  // namespace

LieAlgebra structureAlgebra(const RawStructure& raw) {
  const auto& c = raw.coeffs;
  const auto& e = raw.eps;
  if (e.size() != 3) throw InvalidInputError("families are three-dimensional");
  LieAlgebra g = makeLieAlgebra(3);
  switch (raw.kind) {
    case StructureKind::Diagonal:
      for (std::size_t a = 0; a < 3; ++a) setBracket(g, a, (a + 1) % 3, (a + 2) % 3, c.at((a + 2) % 3) * e[(a + 2) % 3]);
      return g;
    case StructureKind::LMatrix: {
      Matrix L(3, 3);
      for (std::size_t i = 0; i < 9; ++i) L(i / 3, i % 3) = c.at(i);
      return bracketFromL({L, e});
    }
    case StructureKind::NondegKernel:
      setBracket(g, 1, 0, 0, e[0] * c.at(0));
      setBracket(g, 1, 0, 2, e[2] * c.at(1));
      setBracket(g, 1, 2, 0, e[0] * c.at(2));
      setBracket(g, 1, 2, 2, e[2] * c.at(3));
      return g;
    case StructureKind::DegKernel:
      for (auto [a, b] : {std::pair<std::size_t, std::size_t>{0, 1}, {2, 0}}) {
        setBracket(g, a, b, 0, e[0] * c.at(0));
        setBracket(g, a, b, 1, e[1] * c.at(1));
        setBracket(g, a, b, 2, -e[2] * c.at(1));
      }
      setBracket(g, 1, 2, 0, e[0] * c.at(2));
      setBracket(g, 1, 2, 1, e[1] * c.at(3));
      setBracket(g, 1, 2, 2, -e[2] * c.at(3));
      return g;
  }
  return g;
}

SolutionFamilyInstance realize(const std::string& id, const Params& params, const RawStructure& raw) {
  SolutionFamilyInstance inst;
  inst.familyId = id;
  inst.parameters = params;
  inst.raw = raw;
  inst.alg = structureAlgebra(raw);
  inst.eps = raw.eps;
  inst.metric = makeMetric(Matrix::diagonal(raw.eps));
  inst.H = levi(3) * raw.h;
  inst.delta = raw.delta;
  return inst;
}

SolutionFamilyInstance solutionFamily(const std::string& familyId, const Params& params) {
  const FamilySpec& spec = specOf(familyId);
  Params full;
  for (const auto& ps : spec.params) {
    auto it = params.find(ps.name);
    if (it != params.end())
      full[ps.name] = it->second;
    else if (ps.fallback)
      full[ps.name] = *ps.fallback;
    else
      throw InvalidInputError("family " + spec.id + " needs parameter " + ps.name);
  }
  for (const auto& [k, v] : params)
    if (!full.count(k)) throw InvalidInputError("family " + spec.id + " has no parameter " + k);
  return realize(spec.id, full, spec.build(full));
}

const std::vector<std::string>& knownFamilies() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& s : specs()) v.push_back(s.id);
    return v;
  }();
  return ids;
}

std::vector<std::string> familyParameterNames(const std::string& familyId) {
  std::vector<std::string> out;
  for (const auto& p : specOf(familyId).params) out.push_back(p.name);
  return out;
}

AdaptedBasis adaptedBasisOf(const SolutionFamilyInstance& inst) {
  return adaptedBasisOrthonormal(inst.alg, inst.eps, inst.H);
}

EinsteinVerdict einsteinOf(const SolutionFamilyInstance& inst) {
  DorfmanTensor B = dorfmanTensor(adaptedBasisOf(inst));
  return isGeneralizedEinstein(generalizedRicci(B, inst.delta));
}

double einsteinResidual(const RawStructure& raw) {
  AdaptedBasis basis = adaptedBasisOrthonormal(structureAlgebra(raw), raw.eps, levi(3) * raw.h);
  return isGeneralizedEinstein(generalizedRicci(dorfmanTensor(basis), raw.delta)).residual;
}

std::vector<Perturbation> perturbations(const SolutionFamilyInstance& inst) {
  const RawStructure& base = inst.raw;
  double scale = std::abs(base.h);
  for (double c : base.coeffs) scale = std::max(scale, std::abs(c));
  for (double d : base.delta) scale = std::max(scale, std::abs(d));
  if (scale == 0.0) scale = 1.0;
  auto bump = [&](double x) { return x != 0.0 ? 1.05 * x : 0.05 * scale; };

  std::vector<Perturbation> out;
  auto consider = [&](std::string label, RawStructure raw) {
    if (!validateLieAlgebra(structureAlgebra(raw)).valid) return;
    double r = einsteinResidual(raw);
    out.push_back({std::move(label), std::move(raw), r});
  };
  for (std::size_t i = 0; i < base.coeffs.size(); ++i) {
    RawStructure r = base;
    r.coeffs[i] = bump(r.coeffs[i]);
    consider("coeff" + std::to_string(i + 1), r);
  }
  {
    RawStructure r = base;
    r.h = bump(r.h);
    consider("h", r);
  }
  for (std::size_t i = 0; i < base.delta.size(); ++i) {
    RawStructure r = base;
    r.delta[i] = bump(r.delta[i]);
    consider("delta" + std::to_string(i + 1), r);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.residual > b.residual; });
  return out;
}

}  // namespace gencurv
