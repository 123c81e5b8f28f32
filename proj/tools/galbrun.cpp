// Command line driver for the studies, single solves and stability diagnostics.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "galbrun/forms.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/methods.hpp"
#include "galbrun/norms.hpp"
#include "galbrun/problems.hpp"
#include "galbrun/study.hpp"

namespace {

constexpr int kExitSolverFailure = 1;
constexpr int kExitBadFlags = 2;

struct Flags {
  std::vector<int> degrees;
  std::vector<int> levels;
  std::vector<double> cs2;
  std::vector<std::string> methods;
  std::optional<double> lambda_b;
  std::optional<double> lambda_n;
  std::optional<int> geom_order;
  std::string out;
  bool quiet = false;
  // solve / diagnostics
  std::string problem = "convergence";
  double flow_scale = galbrun::kFlowScale;
  double forcing_scale = 1.0;
  std::string dump_matrix;
  std::string dump_mesh;
};

std::vector<galbrun::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<galbrun::Method> out;
  if (names.empty()) return {galbrun::kAllMethods.begin(), galbrun::kAllMethods.end()};
  for (const auto& n : names) out.push_back(galbrun::parse_method(n));
  return out;
}

galbrun::StudyOptions study_options(const Flags& f) {
  galbrun::StudyOptions o;
  o.degrees = f.degrees;
  o.levels = f.levels;
  o.cs2_values = f.cs2;
  o.methods = parse_methods(f.methods);
  o.lambda_b = f.lambda_b;
  o.lambda_n = f.lambda_n;
  o.geom_order = f.geom_order;
  o.forcing_scale = f.forcing_scale;
  o.out_dir = f.out;
  o.log = f.quiet ? nullptr : &std::cerr;
  return o;
}

int finish_study(const galbrun::StudyReport& report, const Flags& f) {
  if (f.out.empty()) galbrun::write_long_csv(report, std::cout);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  return report.warnings.empty() ? 0 : kExitSolverFailure;
}

galbrun::ManufacturedProblem make_problem(const Flags& f, int p) {
  const double cs2 = f.cs2.empty() ? 1.0 : f.cs2.front();
  if (f.problem == "convergence") return galbrun::convergence_problem(p);
  if (f.problem == "locking") return galbrun::locking_problem(p, cs2);
  if (f.problem == "gradrob") return galbrun::gradrob_problem(p, cs2);
  throw galbrun::PreconditionError("unknown problem '" + f.problem + "'");
}

int run_solve(const Flags& f) {
  using namespace galbrun;
  const int p = f.degrees.empty() ? 2 : f.degrees.front();
  const int level = f.levels.empty() ? 2 : f.levels.front();
  const auto methods = parse_methods(f.methods);
  StudyOptions overrides = study_options(f);
  const ManufacturedProblem base = make_problem(f, p);
  gate_manufactured(base);
  const ManufacturedProblem problem = with_overrides(base, overrides);
  const auto mesh =
      std::make_shared<const Mesh>(make_unit_disc_mesh(level, f.geom_order.value_or(default_geom_order(p))));
  if (!f.dump_mesh.empty()) {
    std::ofstream os(f.dump_mesh);
    write_mesh(*mesh, os);
  }
  int status = 0;
  std::cout << "method,level,p,h,ndof,l2_error,xh_error,l2_norm\n";
  for (Method m : methods) {
    if (!method_supports(m, p)) {
      throw PreconditionError(std::string(method_name(m)) + " does not support p = " +
                              std::to_string(p));
    }
    if (!f.dump_matrix.empty()) {
      const Discretization disc = assemble_method(m, mesh, p, problem.coefficients,
                                                  problem.forcing);
      std::ofstream os(f.dump_matrix + "_" + std::string(method_name(m)) + ".txt");
      write_matrix(disc.system.matrix, os);
    }
    const CellResult cell = solve_cell(problem, m, mesh, p);
    std::cout << method_name(m) << ',' << level << ',' << p << ','
              << format_number(mesh_size(*mesh)) << ',' << cell.ndof << ',';
    if (cell.ok) {
      std::cout << format_number(cell.norms.l2_error) << ','
                << format_number(cell.norms.xh_error) << ','
                << format_number(cell.norms.l2_norm) << '\n';
    } else {
      std::cout << ",,\n";
      std::cerr << "warning: " << method_name(m) << ": " << cell.message << '\n';
      status = kExitSolverFailure;
    }
  }
  return status;
}

int run_diagnostics(const Flags& f) {
  using namespace galbrun;
  const auto methods = parse_methods(f.methods);
  const std::vector<int> degrees = f.degrees.empty() ? std::vector<int>{1} : f.degrees;
  const std::vector<int> levels = f.levels.empty() ? std::vector<int>{1} : f.levels;
  std::ofstream file;
  if (!f.out.empty()) {
    std::filesystem::create_directories(f.out);
    file.open(std::filesystem::path(f.out) / "diagnostics.json");
  }
  std::ostream& os = f.out.empty() ? std::cout : file;
  for (Method m : methods) {
    for (int p : degrees) {
      for (int level : levels) {
        DiagnosticsOptions opt;
        opt.method = m;
        opt.level = level;
        opt.p = p;
        opt.cs2 = f.cs2.empty() ? 1.0 : f.cs2.front();
        opt.flow_scale = f.flow_scale;
        opt.lambda_b = f.lambda_b;
        opt.lambda_n = f.lambda_n;
        opt.geom_order = f.geom_order;
        write_diagnostics(galbrun::run_diagnostics(opt), os);
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element solver for a Galbrun-type model problem on the unit disc"};
  app.set_version_flag("--version", galbrun::version_string());
  app.set_config("--config", "", "INI/TOML file with key=value defaults; flags override it");
  app.require_subcommand(1);

  Flags f;
  app.add_option("--p", f.degrees, "Polynomial degree(s)")->delimiter(',');
  app.add_option("--levels", f.levels, "Disc refinement level(s)")->delimiter(',');
  app.add_option("--cs2", f.cs2, "Squared sound speed value(s)")->delimiter(',');
  app.add_option("--methods", f.methods, "Subset of M1,M2,M3,M4")->delimiter(',');
  app.add_option("--lambda-b", f.lambda_b, "Streamline jump penalty")->check(CLI::NonNegativeNumber);
  app.add_option("--lambda-n", f.lambda_n, "Normal jump penalty")->check(CLI::NonNegativeNumber);
  app.add_option("--geom-order", f.geom_order, "Boundary geometry order (default max(p, 2))")
      ->check(CLI::Range(1, 8));
  app.add_option("--out", f.out, "Output directory");
  app.add_flag("--quiet", f.quiet, "No progress output");
  app.add_option("--problem", f.problem, "solve: convergence | locking | gradrob")
      ->check(CLI::IsMember({"convergence", "locking", "gradrob"}));
  app.add_option("--flow-scale", f.flow_scale, "diagnostics: b = s (-y, x)");
  app.add_option("--forcing-scale", f.forcing_scale, "Multiply the forcing by this factor");
  app.add_option("--dump-matrix", f.dump_matrix, "solve: write system matrices with this prefix");
  app.add_option("--dump-mesh", f.dump_mesh, "solve: write the mesh to this file");

  auto* convergence = app.add_subcommand("convergence", "L2/X_h error study over p and h");
  auto* locking = app.add_subcommand("locking", "Volume-locking study over cs2 and h");
  auto* gradrob = app.add_subcommand("gradrob", "Gradient-robustness study over cs2 and h");
  auto* solve = app.add_subcommand("solve", "Single solve on one mesh");
  auto* diagnostics = app.add_subcommand("diagnostics", "Kernel and control constant of b_h");
  for (auto* sub : {convergence, locking, gradrob, solve, diagnostics}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadFlags;
  }

  try {
    if (*convergence) return finish_study(galbrun::run_convergence(study_options(f)), f);
    if (*locking) return finish_study(galbrun::run_locking(study_options(f)), f);
    if (*gradrob) return finish_study(galbrun::run_gradrob(study_options(f)), f);
    if (*solve) return run_solve(f);
    if (*diagnostics) return run_diagnostics(f);
  } catch (const galbrun::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFlags;
  } catch (const galbrun::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  return kExitBadFlags;
}
