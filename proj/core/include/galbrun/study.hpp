#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "galbrun/linalg.hpp"
#include "galbrun/methods.hpp"
#include "galbrun/norms.hpp"
#include "galbrun/problems.hpp"
#include "galbrun/report.hpp"

namespace galbrun {

struct StudyOptions {
  std::vector<int> degrees;        // convergence: all; locking/gradrob: first entry
  std::vector<int> levels;         // empty: study default
  std::vector<double> cs2_values;  // locking/gradrob
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::optional<double> lambda_b;  // override of the problem penalties
  std::optional<double> lambda_n;
  std::optional<int> geom_order;   // default: default_geom_order(p)
  double forcing_scale = 1.0;
  std::string out_dir;             // empty: no files written
  std::ostream* log = nullptr;     // progress lines
  bool timestamp = true;           // record wall-clock time in the metadata file
};

/// Boundary geometry order used when none is requested: max(p, 2), so that
/// p = 1 also sees a curved boundary.
inline int default_geom_order(int p) { return p < 2 ? 2 : p; }

/// Disc levels 1-4 for p <= 2 and 1-3 otherwise.
std::vector<int> default_levels(int p);

struct CellResult {
  bool ok = false;
  ErrorNorms norms;
  int ndof = 0;
  double seconds = 0.0;
  std::string message;
};

/// Assembles and solves one method on one mesh. Solver failures are reported
/// through `ok`/`message`; precondition violations propagate.
CellResult solve_cell(const ManufacturedProblem& problem, Method method,
                      std::shared_ptr<const Mesh> mesh, int p);

/// Applies the overrides of `options` to a problem. The forcing scale multiplies
/// f only; the exact solution is kept, so errors are measured against it.
ManufacturedProblem with_overrides(ManufacturedProblem problem, const StudyOptions& options);

/// L2 and X_h errors for every (p, level, method); M2 is skipped for p = 1.
StudyReport run_convergence(const StudyOptions& options);
/// L2 and X_h errors for every (cs2, level, method) at p = degrees[0] (default 2).
StudyReport run_locking(const StudyOptions& options);
/// ||u_h||_L2 for every (cs2, level, method) at p = degrees[0] (default 3).
StudyReport run_gradrob(const StudyOptions& options);

struct DiagnosticsOptions {
  Method method = Method::M3;
  int level = 1;
  int p = 1;
  double cs2 = 1.0;
  double flow_scale = kFlowScale;
  std::optional<double> lambda_b;  // default 10 p^2
  std::optional<double> lambda_n;  // default 100 p^2
  std::optional<int> geom_order;   // default default_geom_order(p)
};

struct DiagnosticsReport {
  DiagnosticsOptions options;
  int ndof = 0;                // free dofs
  ControlConstant control;
  double min_eig_a = 0.0;
  double min_eig_b = 0.0;      // relative to max |eig b|
};

/// Dense b_h kernel and control constant of a method on a disc mesh.
DiagnosticsReport run_diagnostics(const DiagnosticsOptions& options);
void write_diagnostics(const DiagnosticsReport& report, std::ostream& os);

/// Library version plus the git revision the build was configured from.
std::string version_string();

}  // namespace galbrun
