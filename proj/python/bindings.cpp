#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gencurv/dim3.hpp"
#include "gencurv/instance.hpp"
#include "gencurv/tables.hpp"

namespace py = pybind11;
using namespace gencurv;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows rows(const Matrix& m) {
  Rows out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

Instance load(const std::string& source, bool isText) {
  Instance inst = isText ? parseInstance(source) : loadInstance(source);
  requireValid(inst);
  return inst;
}

py::dict ricci(const std::string& source, bool text) {
  Instance inst = load(source, text);
  AdaptedBasis b = adaptedBasisOf(inst);
  DorfmanTensor B = dorfmanTensor(b);
  GeneralizedRicci r = generalizedRicci(B, inst.delta);
  GeneralizedRicci viaR =
      ricciFromCurvature(curvatureOfConnection(prescribedDivergenceConnection(B, inst.delta), B), b.n, B.eta);
  EinsteinVerdict v = isGeneralizedEinstein(r);
  py::dict d;
  d["plus"] = rows(r.plus);
  d["minus"] = rows(r.minus);
  d["einstein"] = v.einstein;
  d["residual"] = v.residual;
  d["oracle_gap"] = std::max(maxAbsDiff(viaR.plus, r.plus), maxAbsDiff(viaR.minus, r.minus));
  d["frame_signs"] = b.eps;
  return d;
}

py::dict validate(const std::string& source, bool text) {
  Instance inst = text ? parseInstance(source) : loadInstance(source);
  InstanceCheck c = checkInstance(inst);
  py::dict d;
  d["valid"] = c.valid;
  d["jacobi"] = c.jacobi;
  d["dH"] = c.dH;
  d["problem"] = c.problem;
  d["digest"] = instanceDigest(inst);
  return d;
}

py::dict summary(const TableReport& rep) {
  auto row = [](const RowResult& r) {
    py::dict d;
    d["id"] = r.spec.id;
    d["instances"] = r.instances;
    d["max_residual"] = r.maxResidual;
    d["min_perturbed_residual"] = r.minPerturbation;
    d["pass"] = r.pass;
    return d;
  };
  py::list t1, t2;
  for (const auto& r : rep.table1) t1.append(row(r));
  for (const auto& r : rep.table2) t2.append(row(r));
  py::dict d;
  d["pass"] = rep.pass;
  d["table1"] = t1;
  d["table2"] = t2;
  d["table1_csv"] = tableCsv(rep, 1);
  d["table2_csv"] = tableCsv(rep, 2);
  d["report"] = reportMarkdown(rep);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<InvalidInputError>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "Unsupported", PyExc_NotImplementedError);

  m.def("tolerance", &tolerance);
  m.def("set_tolerance", &setTolerance, py::arg("tol"));
  m.def("ricci", &ricci, py::arg("source"), py::arg("text") = false,
        "Generalized Ricci blocks of an instance file (or JSON text with text=True).");
  m.def("validate", &validate, py::arg("source"), py::arg("text") = false);
  m.def(
      "classify",
      [](const std::string& source, bool text) { return identifyBianchi(load(source, text).alg).name; },
      py::arg("source"), py::arg("text") = false);
  m.def(
      "family",
      [](const std::string& id, const Params& params) { return instanceToJson(instanceFromFamily(solutionFamily(id, params))); },
      py::arg("id"), py::arg("parameters") = Params{}, "Canonical instance text for a solution family member.");
  m.def("families", &knownFamilies);
  m.def(
      "verify_tables", [](const std::string& grid) { return summary(verifyTables(grid == "coarse" ? Grid::Coarse : Grid::Full)); },
      py::arg("grid") = "full");

#ifdef VERSION_INFO
#define STR(x) #x
#define XSTR(x) STR(x)
  m.attr("__version__") = XSTR(VERSION_INFO);
#endif
}
