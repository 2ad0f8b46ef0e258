#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gencurv/dim3.hpp"
#include "gencurv/instance.hpp"
#include "gencurv/tables.hpp"
#include "json.hpp"

using namespace gencurv;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kVerification = 1, kInvalid = 2, kUnsupported = 3 };

// Oracle agreement demanded of the two Ricci paths.
constexpr double kOracleBound = 1e-8;

// nlohmann prints the shortest round-trip form, so rounding first gives at
// most 12 significant digits in the output.
double r12(double x) { return std::stod(formatScalar(x)); }

Json vec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(r12(x));
  return a;
}

Json mat(const Matrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(r12(m(i, j)));
    a.push_back(row);
  }
  return a;
}

// Like dump(2), but arrays of scalars stay on one line.
std::string compact(const Json& j, int indent = 0) {
  std::string pad(indent + 2, ' '), close(indent, ' ');
  if (j.is_object()) {
    if (j.empty()) return "{}";
    std::string out = "{\n";
    std::size_t i = 0;
    for (const auto& [k, v] : j.items())
      out += pad + Json(k).dump() + ": " + compact(v, indent + 2) + (++i < j.size() ? ",\n" : "\n");
    return out + close + "}";
  }
  if (j.is_array()) {
    bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
    if (flat) return j.dump(-1, ' ', false, nlohmann::detail::error_handler_t::strict);
    std::string out = "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) out += pad + compact(j[i], indent + 2) + (i + 1 < j.size() ? ",\n" : "\n");
    return out + close + "]";
  }
  return j.dump();
}

void print(const Json& j) { std::cout << compact(j) << "\n"; }

Json header(const std::string& cmd, const std::string& path, const Instance& inst) {
  Json j;
  j["command"] = cmd;
  j["input"] = path;
  j["digest"] = instanceDigest(inst);
  j["n"] = inst.alg.n;
  if (inst.family) j["family"] = *inst.family;
  j["tol"] = r12(tolerance());
  return j;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int cmdRicci(const std::string& path, bool oracle, bool timing) {
  auto t0 = Clock::now();
  Instance inst = loadInstance(path);
  requireValid(inst);
  AdaptedBasis basis = adaptedBasisOf(inst);
  DorfmanTensor B = dorfmanTensor(basis);
  GeneralizedRicci ric = generalizedRicci(B, inst.delta);
  EinsteinVerdict v = isGeneralizedEinstein(ric);
  Json j = header("ricci", path, inst);
  j["frame_signs"] = vec(basis.eps);
  j["delta"] = vec(inst.delta);
  j["ricci_plus"] = mat(ric.plus);
  j["ricci_minus"] = mat(ric.minus);
  j["einstein"] = v.einstein;
  j["residual"] = r12(v.residual);
  int code = kOk;
  if (oracle) {
    Connection D = prescribedDivergenceConnection(B, inst.delta);
    GeneralizedRicci viaR = ricciFromCurvature(curvatureOfConnection(D, B), basis.n, B.eta);
    double gap = std::max(maxAbsDiff(viaR.plus, ric.plus), maxAbsDiff(viaR.minus, ric.minus));
    Json o;
    o["max_discrepancy"] = r12(gap);
    o["bound"] = kOracleBound;
    o["ok"] = gap <= kOracleBound;
    j["oracle"] = o;
    if (gap > kOracleBound) code = kVerification;
  }
  if (timing) j["seconds"] = r12(since(t0));
  print(j);
  return code;
}

int cmdClassify(const std::string& path, bool timing) {
  auto t0 = Clock::now();
  Instance inst = loadInstance(path);
  if (inst.alg.n != 3) throw UnsupportedError("classify needs n = 3, got n = " + std::to_string(inst.alg.n));
  requireValid(inst);
  AdaptedBasis basis = adaptedBasisOf(inst);
  LieAlgebra frameAlg{3, basis.kappaFrame};
  BianchiLabel label = identifyBianchi(inst.alg);
  std::vector<double> tau = traceForm(frameAlg);
  bool unimodular = true;
  for (double t : tau) unimodular = unimodular && std::abs(t) <= tolerance() * std::max(1.0, basis.kappaFrame.maxAbs());
  Json j = header("classify", path, inst);
  j["bianchi"] = label.name;
  j["frame_signs"] = vec(basis.eps);
  j["trace_form"] = vec(tau);
  j["unimodular"] = unimodular;
  if (unimodular) {
    NormalForm nf = normalFormOfSymmetricL(lFromBracket(basis));
    Json l;
    l["normal_form"] = describe(nf.tag);
    l["family"] = nf.tag.family;
    l["parameters"] = vec(nf.tag.params);
    l["diagonalizable"] = nf.tag.family == "L1" || nf.tag.family == "L2";
    l["signs"] = vec(nf.eps);
    l["residual"] = r12(nf.residual);
    j["L"] = l;
  } else {
    UnimodularKernel k = unimodularKernel(frameAlg, Matrix::diagonal(basis.eps));
    Json u;
    u["degenerate"] = k.degenerate;
    u["gram_det"] = r12(k.gramDet);
    u["ideal_defect"] = r12(k.idealDefect);
    j["kernel"] = u;
  }
  j["riemannian_divergence"] = vec(riemannianDivergence(basis));
  if (timing) j["seconds"] = r12(since(t0));
  print(j);
  return kOk;
}

int cmdValidate(const std::string& path) {
  Instance inst = loadInstance(path);
  InstanceCheck c = checkInstance(inst);
  Json j = header("validate", path, inst);
  j["valid"] = c.valid;
  j["antisymmetry"] = r12(c.antisymmetry);
  j["jacobi"] = r12(c.jacobi);
  j["dH"] = r12(c.dH);
  j["metric_det"] = r12(c.metricDet);
  j["signature"] = Json::array({inst.metric.p, inst.metric.q});
  if (!c.valid) j["problem"] = c.problem;
  print(j);
  if (!c.valid) {
    try {
      requireValid(inst);
    } catch (const InvalidInputError& e) {
      std::cerr << "gencurv: " << e.what() << "\n";
    }
    return kInvalid;
  }
  return kOk;
}

void writeFile(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + p.string());
  out << text;
}

int cmdTables(const std::string& outDir, const std::string& gridName, bool timing) {
  auto t0 = Clock::now();
  Grid grid = gridName == "coarse" ? Grid::Coarse : Grid::Full;
  TableReport rep = verifyTables(grid);
  if (timing) rep.seconds = since(t0);
  std::filesystem::path dir(outDir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidInputError("cannot create " + outDir + ": " + ec.message());
  writeFile(dir / "table1.csv", tableCsv(rep, 1));
  writeFile(dir / "table2.csv", tableCsv(rep, 2));
  writeFile(dir / "report.md", reportMarkdown(rep));
  std::vector<std::string> failing;
  for (const auto* rows : {&rep.table1, &rep.table2})
    for (const auto& r : *rows) {
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.spec.id << " instances=" << r.instances
                << " max_residual=" << formatScalar(r.maxResidual)
                << " min_perturbed=" << formatScalar(r.minPerturbation) << "\n";
      if (!r.pass) failing.push_back(r.spec.id);
    }
  for (const auto& r : rep.riemannian) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << " instances=" << r.instances
              << " max_residual=" << formatScalar(r.maxResidual) << "\n";
    if (!r.pass) failing.push_back(r.id);
  }
  std::cout << "rows: table1=" << rep.table1.size() << " table2=" << rep.table2.size() << "\n";
  if (timing) std::cout << "seconds: " << formatScalar(rep.seconds) << "\n";
  if (!failing.empty()) {
    std::cerr << "gencurv: failing rows:";
    for (const auto& f : failing) std::cerr << " " << f;
    std::cerr << "\n";
    return kVerification;
  }
  return kOk;
}

bool applyEnvTolerance() {
  const char* env = std::getenv("GENCURV_TOL");
  if (!env || !*env) return true;
  char* end = nullptr;
  double t = std::strtod(env, &end);
  if (*end != '\0' || !(t > 0.0) || !std::isfinite(t)) {
    std::cerr << "gencurv: GENCURV_TOL must be a positive number, got '" << env << "'\n";
    return false;
  }
  setTolerance(t);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Ricci curvature on Lie groups"};
  app.require_subcommand(1);

  std::string file, outDir = ".", gridName = "full";
  bool oracle = false, timing = false;

  auto* ricci = app.add_subcommand("ricci", "generalized Ricci blocks and Einstein verdict");
  ricci->add_option("file", file, "instance file")->required();
  ricci->add_flag("--oracle", oracle, "also compute through the curvature of D0 + S");
  ricci->add_flag("--timing", timing, "report elapsed time");

  auto* classify = app.add_subcommand("classify", "Bianchi class and normal form (n = 3)");
  classify->add_option("file", file, "instance file")->required();
  classify->add_flag("--timing", timing, "report elapsed time");

  auto* tables = app.add_subcommand("tables", "verify the solution tables");
  tables->add_option("--out", outDir, "output directory");
  tables->add_option("--grid", gridName, "parameter grid")->check(CLI::IsMember({"coarse", "full"}));
  tables->add_flag("--timing", timing, "report elapsed time");

  auto* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("file", file, "instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  if (!applyEnvTolerance()) return kInvalid;

  try {
    if (*ricci) return cmdRicci(file, oracle, timing);
    if (*classify) return cmdClassify(file, timing);
    if (*tables) return cmdTables(outDir, gridName, timing);
    if (*validate) return cmdValidate(file);
  } catch (const UnsupportedError& e) {
    std::cerr << "gencurv: unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const InvalidInputError& e) {
    std::cerr << "gencurv: " << e.what() << "\n";
    return kInvalid;
  } catch (const SingularityError& e) {
    std::cerr << "gencurv: " << e.what() << "\n";
    return kInvalid;
  } catch (const DimensionError& e) {
    std::cerr << "gencurv: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
