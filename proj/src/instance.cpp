#include "gencurv/instance.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gencurv {

namespace {

using nlohmann::json;

std::size_t lineOf(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

// Offset of the top-level key, or of element `index` of the array stored
// under it. Falls back to the key, then to the start of the text.
std::size_t locate(const std::string& text, const std::string& key, std::ptrdiff_t index = -1) {
  std::size_t k = text.find("\"" + key + "\"");
  if (k == std::string::npos) return 0;
  if (index < 0) return k;
  std::size_t i = text.find('[', k);
  if (i == std::string::npos) return k;
  int depth = 0;
  std::ptrdiff_t seen = -1;
  bool expectElement = true;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '"') {
      for (++i; i < text.size() && text[i] != '"'; ++i)
        if (text[i] == '\\') ++i;
      continue;
    }
    if (c == '[' || c == '{') {
      ++depth;
      if (depth == 1) continue;
    } else if (c == ']' || c == '}') {
      if (--depth == 0) break;
      continue;
    } else if (c == ',' && depth == 1) {
      expectElement = true;
      continue;
    }
    if (depth >= 1 && expectElement && !std::isspace(static_cast<unsigned char>(c))) {
      expectElement = false;
      if (++seen == index) return i;
    }
  }
  return k;
}

struct Loader {
  const std::string& text;
  const std::string& source;

  [[noreturn]] void fail(const std::string& msg, const std::string& key = "", std::ptrdiff_t index = -1) const {
    std::size_t line = key.empty() ? 1 : lineOf(text, locate(text, key, index));
    throw InvalidInputError(source + ":" + std::to_string(line) + ": " + msg);
  }

  double number(const json& v, const std::string& what, const std::string& key, std::ptrdiff_t index) const {
    if (!v.is_number()) fail(what + " must be a number", key, index);
    double x = v.get<double>();
    if (!std::isfinite(x)) fail(what + " is not finite", key, index);
    return x;
  }

  std::size_t slot(const json& v, std::size_t n, const std::string& key, std::ptrdiff_t index) const {
    if (!v.is_number_integer()) fail(key + " indices must be integers", key, index);
    long long i = v.get<long long>();
    if (i < 1 || i > static_cast<long long>(n))
      fail(key + " index " + std::to_string(i) + " out of range 1.." + std::to_string(n), key, index);
    return static_cast<std::size_t>(i - 1);
  }

  LieAlgebra kappa(const json& j, std::size_t n) const {
    LieAlgebra alg = makeLieAlgebra(n);
    if (!j.contains("kappa")) return alg;
    const json& arr = j["kappa"];
    if (!arr.is_array()) fail("kappa must be an array of [a, b, c, value]", "kappa");
    Tensor set = Tensor::cube(n, 3);
    for (std::size_t e = 0; e < arr.size(); ++e) {
      auto idx = static_cast<std::ptrdiff_t>(e);
      const json& t = arr[e];
      if (!t.is_array() || t.size() != 4) fail("kappa entries are [a, b, c, value]", "kappa", idx);
      std::size_t a = slot(t[0], n, "kappa", idx), b = slot(t[1], n, "kappa", idx), c = slot(t[2], n, "kappa", idx);
      double v = number(t[3], "kappa value", "kappa", idx);
      if (a == b) {
        if (v != 0.0) fail("kappa_aa^c must vanish", "kappa", idx);
        continue;
      }
      if (set(a, b, c) != 0.0 && std::abs(alg.kappa(a, b, c) - v) > tolerance())
        fail("kappa entry conflicts with an earlier one (antisymmetry)", "kappa", idx);
      alg.kappa(a, b, c) = v;
      alg.kappa(b, a, c) = -v;
      set(a, b, c) = set(b, a, c) = 1.0;
    }
    return alg;
  }

  Tensor threeForm(const json& j, std::size_t n) const {
    Tensor H = Tensor::cube(n, 3);
    if (!j.contains("H")) return H;
    const json& arr = j["H"];
    if (!arr.is_array()) fail("H must be an array of [a, b, c, value]", "H");
    Tensor set = Tensor::cube(n, 3);
    for (std::size_t e = 0; e < arr.size(); ++e) {
      auto idx = static_cast<std::ptrdiff_t>(e);
      const json& t = arr[e];
      if (!t.is_array() || t.size() != 4) fail("H entries are [a, b, c, value]", "H", idx);
      std::size_t a = slot(t[0], n, "H", idx), b = slot(t[1], n, "H", idx), c = slot(t[2], n, "H", idx);
      double v = number(t[3], "H value", "H", idx);
      if (a == b || b == c || a == c) {
        if (v != 0.0) fail("H with a repeated index must vanish", "H", idx);
        continue;
      }
      const std::size_t p[6][3] = {{a, b, c}, {b, c, a}, {c, a, b}, {b, a, c}, {a, c, b}, {c, b, a}};
      if (set(a, b, c) != 0.0 && std::abs(H(a, b, c) - v) > tolerance())
        fail("H entry conflicts with an earlier one (total antisymmetry)", "H", idx);
      for (int k = 0; k < 6; ++k) {
        H(p[k][0], p[k][1], p[k][2]) = k < 3 ? v : -v;
        set(p[k][0], p[k][1], p[k][2]) = 1.0;
      }
    }
    return H;
  }

  Metric metric(const json& j, std::size_t n) const {
    if (!j.contains("g")) fail("missing key g");
    const json& rows = j["g"];
    if (!rows.is_array() || rows.size() != n) fail("g must be an n x n array", "g");
    Matrix g(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      auto idx = static_cast<std::ptrdiff_t>(r);
      if (!rows[r].is_array() || rows[r].size() != n) fail("g row " + std::to_string(r + 1) + " must have n entries", "g", idx);
      for (std::size_t c = 0; c < n; ++c) g(r, c) = number(rows[r][c], "g entry", "g", idx);
    }
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < r; ++c) {
        if (std::abs(g(r, c) - g(c, r)) > tolerance())
          fail("g is not symmetric at (" + std::to_string(c + 1) + ", " + std::to_string(r + 1) + ")", "g",
               static_cast<std::ptrdiff_t>(r));
        g(r, c) = g(c, r);
      }
    try {
      return makeMetric(g);
    } catch (const SingularityError&) {
      fail("g is degenerate", "g");
    }
  }

  Divergence delta(const json& j, std::size_t n) const {
    Divergence d(2 * n, 0.0);
    if (!j.contains("delta")) return d;
    const json& arr = j["delta"];
    if (!arr.is_array() || arr.size() != 2 * n) fail("delta must have 2n = " + std::to_string(2 * n) + " values", "delta");
    for (std::size_t i = 0; i < 2 * n; ++i)
      d[i] = number(arr[i], "delta value", "delta", static_cast<std::ptrdiff_t>(i));
    return d;
  }

  Instance fromFamily(const json& j) const {
    for (const char* k : {"kappa", "g", "H", "delta"})
      if (j.contains(k)) fail(std::string("a family file cannot also give ") + k, k);
    if (!j["family"].is_string()) fail("family must be a string", "family");
    Params params;
    if (j.contains("parameters")) {
      const json& p = j["parameters"];
      if (!p.is_object()) fail("parameters must be an object", "parameters");
      for (const auto& [k, v] : p.items()) params[k] = number(v, "parameter " + k, "parameters", -1);
    }
    Instance inst;
    try {
      inst = instanceFromFamily(solutionFamily(j["family"].get<std::string>(), params));
    } catch (const InvalidInputError& e) {
      fail(e.what(), "family");
    }
    if (j.contains("n") && !(j["n"].is_number_integer() && j["n"].get<long long>() == 3))
      fail("family instances have n = 3", "n");
    return inst;
  }

  Instance load() const {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InvalidInputError(source + ":" + std::to_string(lineOf(text, e.byte == 0 ? 0 : e.byte - 1)) +
                              ": malformed JSON");
    }
    if (!j.is_object()) fail("top level must be an object");
    for (const auto& [k, v] : j.items()) {
      static const std::set<std::string> known{"n", "kappa", "g", "H", "delta", "family", "parameters"};
      if (!known.count(k)) fail("unknown key " + k, k);
    }
    Instance inst;
    if (j.contains("family")) {
      inst = fromFamily(j);
    } else {
      if (j.contains("parameters")) fail("parameters need a family", "parameters");
      if (!j.contains("n") || !j["n"].is_number_integer()) fail("n must be a positive integer", "n");
      long long n = j["n"].get<long long>();
      if (n < 1) fail("n must be a positive integer", "n");
      auto un = static_cast<std::size_t>(n);
      inst.alg = kappa(j, un);
      inst.metric = metric(j, un);
      inst.H = threeForm(j, un);
      inst.delta = delta(j, un);
    }
    inst.source = source;
    for (const auto& [k, v] : j.items()) inst.keyLines[k] = lineOf(text, locate(text, k));
    return inst;
  }
};

bool unitDiagonal(const Matrix& g) {
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      double x = g(i, j);
      if (i == j ? std::abs(x) != 1.0 : x != 0.0) return false;
    }
  return true;
}

double roundTo12(double x) { return std::stod(formatScalar(x)); }

}  // namespace

Instance parseInstance(const std::string& text, const std::string& source) {
  return Loader{text, source}.load();
}

Instance loadInstance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parseInstance(ss.str(), path);
}

Instance instanceFromFamily(const SolutionFamilyInstance& fam) {
  Instance inst;
  inst.alg = fam.alg;
  inst.metric = fam.metric;
  inst.H = fam.H;
  inst.delta = fam.delta;
  inst.family = fam.familyId;
  inst.parameters = fam.parameters;
  return inst;
}

InstanceCheck checkInstance(const Instance& inst) {
  InstanceCheck c;
  LieValidity v = validateLieAlgebra(inst.alg);
  c.antisymmetry = v.antisymmetry;
  c.jacobi = v.jacobi;
  c.dH = inst.alg.n >= 3 ? ceDifferential(inst.H, inst.alg).maxAbs() : 0.0;
  const Matrix& g = inst.metric.g.matrix();
  c.metricSymmetry = maxAbsDiff(g, g.transpose());
  c.metricDet = determinant(g);
  const double tol = tolerance();
  if (c.antisymmetry > tol)
    c.problem = "kappa is not antisymmetric";
  else if (c.jacobi > tol)
    c.problem = "kappa violates the Jacobi identity (max " + formatScalar(c.jacobi) + ")";
  else if (!isAlternating(inst.H, tol))
    c.problem = "H is not alternating";
  else if (c.dH > tol)
    c.problem = "H is not closed (max |dH| " + formatScalar(c.dH) + ")";
  else if (std::abs(c.metricDet) <= tol)
    c.problem = "g is degenerate";
  c.valid = c.problem.empty();
  return c;
}

void requireValid(const Instance& inst) {
  InstanceCheck c = checkInstance(inst);
  if (c.valid) return;
  std::string key = c.problem.rfind("kappa", 0) == 0 ? "kappa" : c.problem.rfind("H ", 0) == 0 ? "H" : "g";
  std::string where = inst.source.empty() ? "<input>" : inst.source;
  auto it = inst.keyLines.find(inst.family ? "family" : key);
  std::size_t line = it == inst.keyLines.end() ? 1 : it->second;
  throw InvalidInputError(where + ":" + std::to_string(line) + ": " + c.problem);
}

AdaptedBasis adaptedBasisOf(const Instance& inst) {
  const Matrix& g = inst.metric.g.matrix();
  if (unitDiagonal(g)) {
    std::vector<double> eps(g.rows());
    for (std::size_t i = 0; i < g.rows(); ++i) eps[i] = g(i, i);
    return adaptedBasisOrthonormal(inst.alg, eps, inst.H);
  }
  return adaptedBasis(inst.alg, inst.metric, inst.H);
}

std::string instanceToJson(const Instance& inst) {
  const std::size_t n = inst.alg.n;
  nlohmann::ordered_json j;
  if (inst.family) {
    j["family"] = *inst.family;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : inst.parameters) p[k] = roundTo12(v);
    j["parameters"] = p;
    return j.dump(2) + "\n";
  }
  j["n"] = n;
  nlohmann::ordered_json k = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (inst.alg.kappa(a, b, c) != 0.0) k.push_back({a + 1, b + 1, c + 1, roundTo12(inst.alg.kappa(a, b, c))});
  j["kappa"] = k;
  nlohmann::ordered_json g = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < n; ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < n; ++c) row.push_back(roundTo12(inst.metric.g(r, c)));
    g.push_back(row);
  }
  j["g"] = g;
  nlohmann::ordered_json h = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        if (inst.H(a, b, c) != 0.0) h.push_back({a + 1, b + 1, c + 1, roundTo12(inst.H(a, b, c))});
  j["H"] = h;
  nlohmann::ordered_json d = nlohmann::ordered_json::array();
  for (double x : inst.delta) d.push_back(roundTo12(x));
  j["delta"] = d;
  // one entry per line reads better than dump(2)'s fully exploded arrays
  std::string out = "{\n";
  std::size_t i = 0;
  for (const auto& [key, val] : j.items()) {
    out += "  \"" + key + "\": ";
    if (val.is_array() && !val.empty() && val[0].is_array()) {
      out += "[\n";
      for (std::size_t e = 0; e < val.size(); ++e) out += "    " + val[e].dump() + (e + 1 < val.size() ? ",\n" : "\n");
      out += "  ]";
    } else {
      out += val.dump();
    }
    out += ++i < j.size() ? ",\n" : "\n";
  }
  return out + "}\n";
}

std::string instanceDigest(const Instance& inst) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : instanceToJson(inst)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gencurv
