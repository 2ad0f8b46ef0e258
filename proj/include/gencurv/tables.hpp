#pragma once

#include <string>
#include <vector>

#include "gencurv/families.hpp"

namespace gencurv {

enum class Grid { Coarse, Full };

// {0.5, 1, 2, sqrt2, pi/3} for the full grid, a two-point subset for coarse.
std::vector<double> gridValues(Grid grid);

struct RowSpec {
  std::string id;
  int table = 1;
  std::string className;
  std::string H;      // "=0" or "!=0"
  std::string g;      // comma-separated qualifiers, possibly empty
  std::string delta;  // table 2 only
  std::string last;   // "L D", "L not D", "u non-deg", "u deg"
};

struct RowResult {
  RowSpec spec;
  std::size_t instances = 0;
  std::size_t excluded = 0;  // grid points where the constraint set is empty
  double maxResidual = 0.0;
  double minPerturbation = 0.0;  // smallest (over instances) of the largest perturbed residual
  std::string weakestPerturbation;
  bool einsteinOk = true;
  bool bianchiOk = true;
  bool qualifiersOk = true;
  bool perturbationOk = true;
  bool pass = true;
  std::vector<std::string> failures;  // first few, for the report
};

// Einstein structures with delta equal to the Riemannian divergence.
struct RiemannianRow {
  std::string id;
  std::string description;
  std::size_t instances = 0;
  double maxResidual = 0.0;
  double maxDivergenceDefect = 0.0;  // |delta - delta^G|
  std::vector<std::string> shapes;   // "diag", "jordan", "complex"
  double sMin = 0.0, sMax = 0.0;     // over the diagonalizable ones
  bool matchesStatement = true;      // A diagonalizable, tr A != 0, s in (-1, 1]; s = 0 if deg
  bool pass = true;
};

// A candidate reading checked numerically; recorded, not part of the verdict.
struct SideCheck {
  std::string id;
  std::string description;
  double residual = 0.0;
  bool einstein = false;
};

struct TableReport {
  Grid grid = Grid::Full;
  double tol = 0.0;
  std::vector<RowResult> table1, table2;
  std::vector<RiemannianRow> riemannian;
  std::vector<SideCheck> sideChecks;
  bool pass = true;
  double seconds = -1.0;  // filled by the caller when timing is wanted
};

const std::vector<RowSpec>& tableRows();
std::vector<Params> rowGrid(const std::string& rowId, Grid grid);
RowResult verifyRow(const RowSpec& row, Grid grid);
TableReport verifyTables(Grid grid);

std::string tableCsv(const TableReport& report, int table);
std::string reportMarkdown(const TableReport& report);

}  // namespace gencurv
