#include "gencurv/tables.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <sstream>

#include "gencurv/dim3.hpp"

namespace gencurv {

namespace {

using Grids = std::vector<Params>;

std::string paramString(const Params& p) {
  std::string s;
  for (const auto& [k, v] : p) s += (s.empty() ? "" : " ") + k + "=" + formatScalar(v);
  return s;
}

// Cartesian product of named value lists, keys in the given order.
Grids product(const std::vector<std::pair<std::string, std::vector<double>>>& axes) {
  Grids out{Params{}};
  for (const auto& [name, values] : axes) {
    Grids next;
    for (const auto& base : out)
      for (double v : values) {
        Params p = base;
        p[name] = v;
        next.push_back(p);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<double> withNegatives(const std::vector<double>& g) {
  std::vector<double> v = g;
  for (double x : g) v.push_back(-x);
  return v;
}

const std::vector<double> kSigns{1.0, -1.0};

bool zeroish(double x, double scale = 1.0) { return std::abs(x) <= tolerance() * std::max(1.0, scale); }

double deltaScale(const Divergence& d) {
  double m = 0.0;
  for (double x : d) m = std::max(m, std::abs(x));
  return m;
}

// Signature of g on [g, g] when that is two-dimensional: +1 definite, -1
// indefinite, 0 degenerate or not a plane.
int derivedPlaneSign(const SolutionFamilyInstance& inst) {
  Matrix D(3, 3);
  std::size_t col = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j, ++col)
      for (std::size_t c = 0; c < 3; ++c) D(c, col) = inst.alg.kappa(i, j, c);
  if (rank(D, 1e-9 * std::max(1.0, D.maxAbs())) != 2) return 0;
  SymEigen e = symmetricEigen(D * D.transpose());
  std::vector<std::size_t> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return e.values[a] > e.values[b]; });
  Matrix B(3, 2);
  B.setColumn(0, e.vectors.column(idx[0]));
  B.setColumn(1, e.vectors.column(idx[1]));
  Matrix gram = B.transpose() * (Matrix::diagonal(inst.eps) * B);
  double det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
  if (std::abs(det) <= 1e-9) return 0;
  return det > 0 ? 1 : -1;
}

bool isFlat(const SolutionFamilyInstance& inst) {
  return leviCivitaCurvature(adaptedBasisOf(inst)).maxAbs() <= tolerance() * 10;
}

bool isUnimodular(const LieAlgebra& alg) {
  for (double t : traceForm(alg))
    if (!zeroish(t, alg.kappa.maxAbs())) return false;
  return true;
}

using Check = std::function<std::string(const SolutionFamilyInstance&)>;  // empty string = ok

struct RowLogic {
  std::function<Grids(Grid)> grid;
  std::function<bool(const BianchiLabel&)> bianchi;
  Check delta;  // table 2 pattern
};

std::string expect(bool ok, const std::string& what) { return ok ? "" : what; }

double trAd(const SolutionFamilyInstance& inst, std::size_t a) { return traceForm(inst.alg)[a]; }

Check primedEqualWithTrace(bool alsoZeroRest) {
  return [alsoZeroRest](const SolutionFamilyInstance& inst) {
    const auto& d = inst.delta;
    double sc = deltaScale(d);
    double t = -trAd(inst, 1);
    bool ok = zeroish(d[0] - d[3], sc) && zeroish(d[1] - d[4], sc) && zeroish(d[2] - d[5], sc);
    ok = ok && zeroish(d[1] - t, sc) && !zeroish(t, sc);
    if (alsoZeroRest) ok = ok && zeroish(d[0], sc) && zeroish(d[2], sc);
    return expect(ok, "delta pattern");
  };
}

bool kindIs(const BianchiLabel& b, BianchiKind k) { return b.kind == k; }

const std::map<std::string, RowLogic>& logic() {
  static const std::map<std::string, RowLogic> m = [] {
    std::map<std::string, RowLogic> L;
    auto signs = std::pair<std::string, std::vector<double>>{"s", kSigns};
    L["t1-abelian"] = {[](Grid) { return product({{"s", kSigns}, {"definite", {1.0, 0.0}}}); },
                       [](const BianchiLabel& b) { return kindIs(b, BianchiKind::Abelian); }, nullptr};
    L["t1-so3"] = {[signs](Grid g) { return product({{"h", gridValues(g)}, {"sign", kSigns}, signs}); },
                   [](const BianchiLabel& b) { return kindIs(b, BianchiKind::SO3); }, nullptr};
    L["t1-so21"] = {[signs](Grid g) { return product({{"h", gridValues(g)}, {"sign", kSigns}, signs}); },
                    [](const BianchiLabel& b) { return kindIs(b, BianchiKind::SO21); }, nullptr};
    auto e2grid = [](Grid g, bool withDelta) {
      Grids out = product({{"a", gridValues(g)}, {"sigma", {1.0, 2.0, 3.0}}, {"definite", {1.0}}, {"s", kSigns}});
      Grids indef = product({{"a", gridValues(g)}, {"sigma", {1.0}}, {"definite", {0.0}}, {"s", kSigns}});
      out.insert(out.end(), indef.begin(), indef.end());
      if (!withDelta) return out;
      Grids with;
      for (auto p : out)
        for (double x : gridValues(g)) {
          p["x1"] = x;
          p["x2"] = 1.0 - x;
          with.push_back(p);
        }
      return with;
    };
    auto e11grid = [](Grid g, bool withDelta) {
      Grids out = product({{"a", gridValues(g)}, {"sigma", {2.0, 3.0}}, {"definite", {0.0}}, {"s", kSigns}});
      if (!withDelta) return out;
      Grids with;
      for (auto p : out)
        for (double x : gridValues(g)) {
          p["x1"] = x;
          p["x2"] = 1.0 - x;
          with.push_back(p);
        }
      return with;
    };
    L["t1-e2"] = {[e2grid](Grid g) { return e2grid(g, false); },
                  [](const BianchiLabel& b) { return kindIs(b, BianchiKind::E2); }, nullptr};
    L["t1-e11"] = {[e11grid](Grid g) { return e11grid(g, false); },
                   [](const BianchiLabel& b) { return kindIs(b, BianchiKind::E11); }, nullptr};
    L["t1-heis"] = {[signs](Grid g) { return product({{"form", {3.0, 4.0}}, {"c", gridValues(g)}, signs}); },
                    [](const BianchiLabel& b) { return kindIs(b, BianchiKind::Heis); }, nullptr};
    auto r31prime = [](const BianchiLabel& b) { return kindIs(b, BianchiKind::R3Prime) && b.parameter == 1.0; };
    L["t1-r31prime"] = {[signs](Grid g) { return product({{"theta", gridValues(g)}, signs}); }, r31prime, nullptr};

    L["t2-abelian"] = {[](Grid) {
                         // 20 random divergences, cycling through the four signatures.
                         std::mt19937_64 rng(20240611);
                         std::uniform_real_distribution<double> u(-2.0, 2.0);
                         Grids out;
                         for (int i = 0; i < 20; ++i) {
                           Params p{{"s", i % 2 ? -1.0 : 1.0}, {"definite", (i / 2) % 2 ? 0.0 : 1.0}};
                           for (int k = 1; k <= 6; ++k) p["d" + std::to_string(k)] = u(rng);
                           out.push_back(p);
                         }
                         return out;
                       },
                       [](const BianchiLabel& b) { return kindIs(b, BianchiKind::Abelian); },
                       [](const SolutionFamilyInstance&) { return std::string(); }};
    auto soGrid = [signs](Grid g) {
      Grids out;
      for (auto p : product({{"h", gridValues(g)}, {"sign", kSigns}, signs}))
        for (double x : gridValues(g)) {
          p["x1"] = x;
          p["x2"] = 1.0 - x;
          p["x3"] = -x;
          out.push_back(p);
        }
      return out;
    };
    Check halfVanishes = [](const SolutionFamilyInstance& inst) {
      const auto& d = inst.delta;
      double sc = deltaScale(d);
      bool plus = zeroish(d[0], sc) && zeroish(d[1], sc) && zeroish(d[2], sc);
      bool minus = zeroish(d[3], sc) && zeroish(d[4], sc) && zeroish(d[5], sc);
      return expect(plus || minus, "neither half of delta vanishes");
    };
    L["t2-so3"] = {soGrid, [](const BianchiLabel& b) { return kindIs(b, BianchiKind::SO3); }, halfVanishes};
    L["t2-so21"] = {soGrid, [](const BianchiLabel& b) { return kindIs(b, BianchiKind::SO21); }, halfVanishes};
    Check sigmaPattern = [](const SolutionFamilyInstance& inst) {
      std::size_t k = static_cast<std::size_t>(inst.parameters.at("sigma")) - 1;
      std::size_t i1 = k, i2 = (k + 1) % 3;
      const auto& d = inst.delta;
      double sc = deltaScale(d);
      return expect(zeroish(d[i1], sc) && zeroish(d[i2], sc) && zeroish(d[i1 + 3], sc) && zeroish(d[i2 + 3], sc),
                    "delta pattern");
    };
    L["t2-e2"] = {[e2grid](Grid g) { return e2grid(g, true); },
                  [](const BianchiLabel& b) { return kindIs(b, BianchiKind::E2); }, sigmaPattern};
    L["t2-e11"] = {[e11grid](Grid g) { return e11grid(g, true); },
                   [](const BianchiLabel& b) { return kindIs(b, BianchiKind::E11); }, sigmaPattern};
    L["t2-heis"] = {[signs](Grid g) {
                      Grids out = product({{"form", {3.0, 4.0}},
                                           {"c", {1.0, 2.0}},
                                           {"p", gridValues(g)},
                                           {"q", withNegatives(gridValues(g))},
                                           signs});
                      Grids ex = product({{"form", {3.0, 4.0}}, {"c", {1.0}}, {"p", {0.7}}, {"q", {-0.3}}, signs});
                      out.insert(out.end(), ex.begin(), ex.end());
                      return out;
                    },
                    [](const BianchiLabel& b) { return kindIs(b, BianchiKind::Heis); },
                    [](const SolutionFamilyInstance& inst) {
                      const auto& d = inst.delta;
                      double sc = deltaScale(d);
                      return expect(zeroish(d[0], sc) && zeroish(d[3], sc) && zeroish(d[1] - d[2], sc) &&
                                        zeroish(d[4] - d[5], sc),
                                    "delta pattern");
                    }};
    L["t2-e11-jordan"] = {[signs](Grid g) {
                            return product({{"form", {3.0, 4.0}}, {"alpha", withNegatives(gridValues(g))}, signs});
                          },
                          [](const BianchiLabel& b) { return kindIs(b, BianchiKind::E11); },
                          [](const SolutionFamilyInstance& inst) {
                            const auto& d = inst.delta;
                            double sc = deltaScale(d);
                            return expect(zeroish(d[0] - d[3], sc) && !zeroish(d[0], sc) && zeroish(d[1], sc) &&
                                              zeroish(d[2], sc) && zeroish(d[4], sc) && zeroish(d[5], sc),
                                          "delta pattern");
                          }};
    L["t2-e11-l5"] = {[signs](Grid g) { return product({{"c", gridValues(g)}, signs}); },
                      [](const BianchiLabel& b) { return kindIs(b, BianchiKind::E11); },
                      [](const SolutionFamilyInstance& inst) {
                        // e1 d1 = -e3 d3 = e1 d4 = -e3 d6 = -sqrt2 (times the scale c), d2 = d5 = 0
                        const auto& d = inst.delta;
                        const auto& e = inst.eps;
                        double x = -std::sqrt(2.0) * inst.parameters.at("c");
                        double sc = deltaScale(d);
                        bool ok = zeroish(e[0] * d[0] - x, sc) && zeroish(-e[2] * d[2] - x, sc) &&
                                  zeroish(e[0] * d[3] - x, sc) && zeroish(-e[2] * d[5] - x, sc) &&
                                  zeroish(d[1], sc) && zeroish(d[4], sc);
                        return expect(ok, "delta pattern");
                      }};
    L["t2-r31prime"] = {[signs](Grid g) { return product({{"theta", gridValues(g)}, signs}); }, r31prime,
                        [](const SolutionFamilyInstance& inst) {
                          const auto& d = inst.delta;
                          double sc = deltaScale(d);
                          return expect(zeroish(d[0] - d[3], sc) && zeroish(d[2] - d[5], sc) && zeroish(d[1], sc) &&
                                            zeroish(d[4], sc),
                                        "delta pattern");
                        }};
    L["t2-r2r-h"] = {[signs](Grid g) {
                       return product({{"lambda", gridValues(g)},
                                       {"rho", gridValues(g)},
                                       {"epsp", kSigns},
                                       {"hsign", kSigns},
                                       signs});
                     },
                     [](const BianchiLabel& b) { return kindIs(b, BianchiKind::R2R); }, primedEqualWithTrace(false)};
    L["t2-r3l-h"] = {[signs](Grid g) {
                       return product({{"lambda", gridValues(g)},
                                       {"mu", withNegatives(gridValues(g))},
                                       {"hsign", kSigns},
                                       signs});
                     },
                     [](const BianchiLabel& b) { return kindIs(b, BianchiKind::R3Lambda) && b.parameter != 1.0; },
                     primedEqualWithTrace(false)};
    L["t2-r31-h"] = {[signs](Grid g) {
                       return product({{"lambda", withNegatives(gridValues(g))}, {"hsign", kSigns}, signs});
                     },
                     [](const BianchiLabel& b) { return kindIs(b, BianchiKind::R3Lambda) && b.parameter == 1.0; },
                     primedEqualWithTrace(true)};
    L["t2-r2r-deg"] = {[signs](Grid g) {
                         Grids out;
                         for (auto p : product({{"mu", gridValues(g)}, {"rho", withNegatives(gridValues(g))}, signs}))
                           for (auto [d1, d4] : {std::pair{0.0, 0.0}, std::pair{0.5, -1.0}}) {
                             p["d1"] = d1;
                             p["d4"] = d4;
                             out.push_back(p);
                           }
                         return out;
                       },
                       [](const BianchiLabel& b) { return kindIs(b, BianchiKind::R2R); }, nullptr};
    L["t2-r3-deg"] = {[signs](Grid g) {
                        return product({{"lambda", withNegatives(gridValues(g))}, {"mu", gridValues(g)}, signs});
                      },
                      [](const BianchiLabel& b) { return kindIs(b, BianchiKind::R3); }, nullptr};
    L["t2-r3l-deg"] = {[signs](Grid g) {
                         return product({{"lambda", gridValues(g)},
                                         {"rho", withNegatives(gridValues(g))},
                                         {"mu", {0.0, 0.5}},
                                         signs});
                       },
                       [](const BianchiLabel& b) { return kindIs(b, BianchiKind::R3Lambda); }, nullptr};
    return L;
  }();
  return m;
}

std::vector<std::string> splitQualifiers(const std::string& g) {
  std::vector<std::string> out;
  std::stringstream ss(g);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(' ') - b + 1));
  }
  return out;
}

std::string checkQualifiers(const RowSpec& row, const SolutionFamilyInstance& inst) {
  bool hZero = std::abs(inst.raw.h) <= tolerance();
  if (row.H == "=0" && !hZero) return "H should vanish";
  if (row.H == "!=0" && hZero) return "H should be nonzero";
  bool definite = std::all_of(inst.eps.begin(), inst.eps.end(), [&](double e) { return e == inst.eps[0]; });
  for (const auto& q : splitQualifiers(row.g)) {
    if (q == "flat" && !isFlat(inst)) return "g should be flat";
    if (q == "def" && !definite) return "g should be definite";
    if (q == "indef" && definite) return "g should be indefinite";
    if (q == "def on [g,g]" && derivedPlaneSign(inst) != 1) return "g should be definite on [g,g]";
    if (q == "indef on [g,g]" && derivedPlaneSign(inst) != -1) return "g should be indefinite on [g,g]";
  }
  if (row.last == "L D" || row.last == "L not D") {
    if (!isUnimodular(inst.alg)) return "algebra should be unimodular";
    NormalForm nf = normalFormOfSymmetricL(lFromBracket(inst.alg, Frame{Matrix::identity(3), inst.eps}));
    bool diag = nf.tag.family == "L1" || nf.tag.family == "L2";
    if ((row.last == "L D") != diag) return "L normal form " + describe(nf.tag);
  } else {
    if (isUnimodular(inst.alg)) return "algebra should be non-unimodular";
    UnimodularKernel k = unimodularKernel(inst.alg, Matrix::diagonal(inst.eps));
    if (k.idealDefect > 1e3 * tolerance()) return "kernel is not an abelian ideal containing [g,g]";
    if ((row.last == "u deg") != k.degenerate) return k.degenerate ? "kernel is degenerate" : "kernel is non-degenerate";
  }
  return "";
}

void noteFailure(RowResult& r, const std::string& what) {
  r.pass = false;
  if (r.failures.size() < 8) r.failures.push_back(what);
}

}  // namespace

std::vector<double> gridValues(Grid grid) {
  if (grid == Grid::Coarse) return {0.5, std::sqrt(2.0)};
  return {0.5, 1.0, 2.0, std::sqrt(2.0), M_PI / 3.0};
}

const std::vector<RowSpec>& tableRows() {
  static const std::vector<RowSpec> rows{
      {"t1-abelian", 1, "R^3", "=0", "flat", "", "L D"},
      {"t1-so3", 1, "so(3)", "!=0", "def", "", "L D"},
      {"t1-so21", 1, "so(2,1)", "!=0", "indef", "", "L D"},
      {"t1-e2", 1, "e(2)", "=0", "flat, def on [g,g]", "", "L D"},
      {"t1-e11", 1, "e(1,1)", "=0", "flat, indef on [g,g]", "", "L D"},
      {"t1-heis", 1, "heis", "=0", "flat, indef", "", "L not D"},
      {"t1-r31prime", 1, "r'3,1", "=0", "indef", "", "u non-deg"},
      {"t2-abelian", 2, "R^3", "=0", "", "arbitrary", "L D"},
      {"t2-so3", 2, "so(3)", "!=0", "def", "delta|E+ = 0 or delta|E- = 0", "L D"},
      {"t2-so21", 2, "so(2,1)", "!=0", "indef", "delta|E+ = 0 or delta|E- = 0", "L D"},
      {"t2-e2", 2, "e(2)", "=0", "def on [g,g]", "d_s1 = d_s2 = d_s1+3 = d_s2+3 = 0", "L D"},
      {"t2-e11", 2, "e(1,1)", "=0", "indef on [g,g]", "d_s1 = d_s2 = d_s1+3 = d_s2+3 = 0", "L D"},
      {"t2-heis", 2, "heis", "=0", "indef", "d1 = d4 = 0, d2 = d3, d5 = d6", "L not D"},
      {"t2-e11-jordan", 2, "e(1,1)", "=0", "indef", "d1 = d4 != 0, d2 = d3 = d5 = d6 = 0", "L not D"},
      {"t2-e11-l5", 2, "e(1,1)", "=0", "indef", "e1 d1 = -e3 d3 = e1 d4 = -e3 d6 = -sqrt2, d2 = d5 = 0",
       "L not D"},
      {"t2-r31prime", 2, "r'3,1", "=0", "indef", "d_i = d_i', d2 = d5 = 0", "u non-deg"},
      {"t2-r2r-h", 2, "r2 + R", "!=0", "indef", "d_i = d_i', d2 = d5 = -tr ad_v2 != 0", "u non-deg"},
      {"t2-r3l-h", 2, "r3,l (l != 1)", "!=0", "indef", "d_i = d_i', d2 = d5 = -tr ad_v2 != 0", "u non-deg"},
      {"t2-r31-h", 2, "r3,1", "!=0", "indef", "d1 = d3 = d4 = d6 = 0, d2 = d5 = -tr ad_v2 != 0", "u non-deg"},
      {"t2-r2r-deg", 2, "r2 + R", "=0", "indef", "", "u deg"},
      {"t2-r3-deg", 2, "r3", "=0", "indef", "", "u deg"},
      {"t2-r3l-deg", 2, "r3,l", "=0", "indef", "", "u deg"},
  };
  return rows;
}

std::vector<Params> rowGrid(const std::string& rowId, Grid grid) {
  auto it = logic().find(rowId);
  if (it == logic().end()) throw InvalidInputError("unknown table row " + rowId);
  return it->second.grid(grid);
}

RowResult verifyRow(const RowSpec& row, Grid grid) {
  const RowLogic& lg = logic().at(row.id);
  RowResult r;
  r.spec = row;
  r.minPerturbation = INFINITY;
  const double tol = tolerance();
  for (const Params& p : lg.grid(grid)) {
    SolutionFamilyInstance inst;
    try {
      inst = solutionFamily(row.id, p);
    } catch (const InvalidInputError&) {
      ++r.excluded;
      continue;
    }
    ++r.instances;
    std::string where = row.id + " [" + paramString(p) + "]";
    EinsteinVerdict v = einsteinOf(inst);
    r.maxResidual = std::max(r.maxResidual, v.residual);
    if (!v.einstein) {
      r.einsteinOk = false;
      noteFailure(r, where + ": residual " + formatScalar(v.residual));
    }
    BianchiLabel b = identifyBianchi(inst.alg);
    if (!lg.bianchi(b)) {
      r.bianchiOk = false;
      noteFailure(r, where + ": class " + b.name);
    }
    std::string q = checkQualifiers(row, inst);
    if (q.empty() && lg.delta) q = lg.delta(inst);
    if (!q.empty()) {
      r.qualifiersOk = false;
      noteFailure(r, where + ": " + q);
    }
    auto perts = perturbations(inst);
    double best = perts.empty() ? 0.0 : perts.front().residual;
    if (best < r.minPerturbation) {
      r.minPerturbation = best;
      r.weakestPerturbation = where + " " + (perts.empty() ? "none" : perts.front().label);
    }
    if (!(best > 10 * tol)) {
      r.perturbationOk = false;
      noteFailure(r, where + ": perturbation stays Einstein");
    }
  }
  if (r.instances == 0) {
    r.pass = false;
    r.failures.push_back(row.id + ": no grid point satisfies the constraints");
    r.minPerturbation = 0.0;
  }
  return r;
}

namespace {

std::string shapeOf(const KernelAction& k) {
  if (!k.realEigenvalues) return "complex";
  if (!k.diagonalizable) return "jordan";
  return "diag";
}

RiemannianRow riemannianRow(const std::string& id, const std::string& description,
                            const std::vector<RawStructure>& raws, bool degenerate) {
  RiemannianRow row;
  row.id = id;
  row.description = description;
  std::set<std::string> shapes;
  bool anyDiag = false;
  for (RawStructure raw : raws) {
    SolutionFamilyInstance inst = realize(id, {}, raw);
    Divergence dg = riemannianDivergence(adaptedBasisOf(inst));
    double defect = 0.0;
    for (std::size_t i = 0; i < dg.size(); ++i) defect = std::max(defect, std::abs(dg[i] - inst.delta[i]));
    row.maxDivergenceDefect = std::max(row.maxDivergenceDefect, defect);
    inst.delta = dg;
    EinsteinVerdict v = einsteinOf(inst);
    row.maxResidual = std::max(row.maxResidual, v.residual);
    ++row.instances;
    KernelAction k = kernelAction(inst.alg);
    shapes.insert(shapeOf(k));
    if (k.realEigenvalues && k.diagonalizable) {
      double sv = std::abs(k.s) < 1e-12 ? 0.0 : k.s;
      row.sMin = anyDiag ? std::min(row.sMin, sv) : sv;
      row.sMax = anyDiag ? std::max(row.sMax, sv) : sv;
      anyDiag = true;
    }
    bool stated = k.realEigenvalues && k.diagonalizable && k.s > -1.0 && k.s <= 1.0;
    if (degenerate) stated = stated && zeroish(k.s);
    if (!degenerate) stated = stated && !zeroish(trace(k.A));
    if (!stated) row.matchesStatement = false;
    if (!v.einstein || defect > 1e3 * tolerance()) row.pass = false;
  }
  row.shapes.assign(shapes.begin(), shapes.end());
  return row;
}

std::vector<RawStructure> rawsOf(const std::string& rowId, Grid grid, const std::function<bool(const Params&)>& keep) {
  std::vector<RawStructure> out;
  for (const Params& p : rowGrid(rowId, grid)) {
    if (!keep(p)) continue;
    try {
      out.push_back(solutionFamily(rowId, p).raw);
    } catch (const InvalidInputError&) {
    }
  }
  return out;
}

std::vector<RiemannianRow> riemannianRows(Grid grid) {
  auto all = [](const Params&) { return true; };
  std::vector<RawStructure> nondeg = rawsOf("t2-r2r-h", grid, all);
  for (const char* id : {"t2-r3l-h", "t2-r31-h"}) {
    auto more = rawsOf(id, grid, all);
    nondeg.insert(nondeg.end(), more.begin(), more.end());
  }
  std::vector<RiemannianRow> rows;
  rows.push_back(riemannianRow("rd-nondeg", "non-degenerate kernel, delta = delta^G", nondeg, false));
  rows.push_back(riemannianRow("rd-deg", "degenerate kernel, lambda = 0, delta = delta^G",
                               rawsOf("t2-r2r-deg", grid,
                                      [](const Params& p) { return p.at("d1") == 0.0 && p.at("d4") == 0.0; }),
                               true));
  std::vector<RawStructure> jordan;
  for (double s : kSigns)
    for (double l : withNegatives(gridValues(grid)))
      for (double m : {0.0, 0.5}) {
        RawStructure raw{StructureKind::DegKernel, {l, m, 0.0, -l}, 0.0, {s, s, -s}, Divergence(6, 0.0)};
        SolutionFamilyInstance inst = realize("rd-deg-rho=-lambda", {}, raw);
        raw.delta = riemannianDivergence(adaptedBasisOf(inst));
        jordan.push_back(raw);
      }
  rows.push_back(riemannianRow("rd-deg-rho=-lambda",
                               "degenerate kernel, rho = -lambda, delta = delta^G (r3 and r3,1)", jordan, true));
  return rows;
}

std::vector<SideCheck> sideChecks() {
  std::vector<SideCheck> out;
  auto add = [&](std::string id, std::string what, const RawStructure& raw) {
    double r = einsteinResidual(raw);
    out.push_back({std::move(id), std::move(what), r, r <= tolerance()});
  };
  for (double s : kSigns) {
    RawStructure l5 = solutionFamily("t2-e11-l5", {{"s", s}}).raw;
    double x = std::sqrt(2.0);
    l5.delta = {-x, 0.0, x, x, 0.0, -x};
    add("l5-alternate-pattern s=" + formatScalar(s), "L5(0) with d1 = -d4 = -d3 = d6 = -sqrt2, d2 = d5 = 0", l5);
    RawStructure r31 = solutionFamily("t2-r31prime", {{"theta", 1.0}, {"s", s}}).raw;
    r31.delta = {0.5, 0.0, 0.5, 0.5, 0.0, 0.5};
    add("r31prime-divergence s=" + formatScalar(s), "r'3,1 with d1 = d3 = d4 = d6 = 0.5, d2 = d5 = 0", r31);
    RawStructure r2r = solutionFamily("t2-r2r-h", {{"lambda", 2.0}, {"rho", 0.5}, {"t", 0.7}, {"s", s}}).raw;
    add("r2r-free-divergence s=" + formatScalar(s),
        "r2 + R with H != 0 and the free divergence direction t = 0.7 (d_i != d_i')", r2r);
  }
  return out;
}

}  // namespace

TableReport verifyTables(Grid grid) {
  TableReport rep;
  rep.grid = grid;
  rep.tol = tolerance();
  std::vector<std::future<RowResult>> jobs;
  for (const RowSpec& row : tableRows())
    jobs.push_back(std::async(std::launch::async, [row, grid] { return verifyRow(row, grid); }));
  for (auto& j : jobs) {
    RowResult r = j.get();
    rep.pass = rep.pass && r.pass;
    (r.spec.table == 1 ? rep.table1 : rep.table2).push_back(std::move(r));
  }
  rep.riemannian = riemannianRows(grid);
  for (const auto& r : rep.riemannian) rep.pass = rep.pass && r.pass;
  rep.sideChecks = sideChecks();
  return rep;
}

namespace {

std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string yesNo(bool b) { return b ? "yes" : "no"; }

std::string cell(const std::string& s) {
  std::string out;
  for (char c : s) out += c == '|' ? std::string("\\|") : std::string(1, c);
  return out;
}

}  // namespace

std::string tableCsv(const TableReport& report, int table) {
  std::ostringstream os;
  os << "row,class,H,g," << (table == 2 ? "delta," : "")
     << "type,instances,excluded,max_residual,min_perturbed_residual,bianchi,qualifiers,pass\n";
  for (const auto& r : table == 1 ? report.table1 : report.table2) {
    os << r.spec.id << ',' << csvField(r.spec.className) << ',' << r.spec.H << ',' << csvField(r.spec.g) << ',';
    if (table == 2) os << csvField(r.spec.delta) << ',';
    os << csvField(r.spec.last) << ',' << r.instances << ',' << r.excluded << ',' << formatScalar(r.maxResidual) << ','
       << formatScalar(r.minPerturbation) << ',' << yesNo(r.bianchiOk) << ',' << yesNo(r.qualifiersOk) << ','
       << yesNo(r.pass) << '\n';
  }
  return os.str();
}

std::string reportMarkdown(const TableReport& rep) {
  std::ostringstream os;
  os << "# Table verification\n\n";
  os << "- grid: " << (rep.grid == Grid::Full ? "full" : "coarse") << "\n";
  os << "- tolerance: " << formatScalar(rep.tol) << "\n";
  os << "- perturbations: every single coefficient moved by 5%, the largest residual is kept; a row needs it above "
     << formatScalar(10 * rep.tol) << "\n";
  os << "- verdict: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  if (rep.seconds >= 0) os << "- elapsed: " << formatScalar(rep.seconds) << " s\n";
  os << "\n";
  auto emit = [&](const std::vector<RowResult>& rows, bool withDelta, const char* title) {
    os << "## " << title << "\n\n";
    os << "| class | H | g |" << (withDelta ? " delta |" : "") << " | row | instances | max residual | min perturbed | pass |\n";
    os << "|---|---|---|" << (withDelta ? "---|" : "") << "---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
      os << "| " << r.spec.className << " | " << r.spec.H << " | " << r.spec.g << " |";
      if (withDelta) os << ' ' << cell(r.spec.delta) << " |";
      os << ' ' << r.spec.last << " | " << r.spec.id << " | " << r.instances;
      if (r.excluded) os << " (+" << r.excluded << " empty)";
      os << " | " << formatScalar(r.maxResidual) << " | " << formatScalar(r.minPerturbation) << " | "
         << (r.pass ? "yes" : "no") << " |\n";
    }
    os << "\n";
    for (const auto& r : rows)
      for (const auto& f : r.failures) os << "- FAIL " << f << "\n";
    if (!std::all_of(rows.begin(), rows.end(), [](const RowResult& r) { return r.failures.empty(); })) os << "\n";
  };
  emit(rep.table1, false, "Table 1: divergence-free solutions");
  emit(rep.table2, true, "Table 2: arbitrary divergence");

  os << "## Riemannian divergence\n\n";
  os << "| row | description | instances | max residual | max \\|delta - delta^G\\| | kernel action | as stated | pass |\n";
  os << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rep.riemannian) {
    std::string shapes;
    for (const auto& s : r.shapes) {
      std::string item = s == "diag" ? "diag(1, s), s in [" + formatScalar(r.sMin) + ", " + formatScalar(r.sMax) + "]" : s;
      shapes += (shapes.empty() ? "" : "; ") + item;
    }
    os << "| " << r.id << " | " << r.description << " | " << r.instances << " | " << formatScalar(r.maxResidual)
       << " | " << formatScalar(r.maxDivergenceDefect) << " | " << shapes << " | " << yesNo(r.matchesStatement)
       << " | " << yesNo(r.pass) << " |\n";
  }
  os << "\n## Other readings checked\n\n";
  os << "| check | description | residual | Einstein |\n|---|---|---|---|\n";
  for (const auto& c : rep.sideChecks)
    os << "| " << c.id << " | " << c.description << " | " << formatScalar(c.residual) << " | " << yesNo(c.einstein)
       << " |\n";
  return os.str();
}

}  // namespace gencurv
