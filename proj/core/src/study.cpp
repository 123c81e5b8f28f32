#include "galbrun/study.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include "json.hpp"

#ifndef GALBRUN_VERSION
#define GALBRUN_VERSION "0.0.0"
#endif
#ifndef GALBRUN_GIT_REVISION
#define GALBRUN_GIT_REVISION "unknown"
#endif

namespace galbrun {

namespace fs = std::filesystem;

std::string version_string() { return std::string(GALBRUN_VERSION) + "+" + GALBRUN_GIT_REVISION; }

std::vector<int> default_levels(int p) {
  return p <= 2 ? std::vector<int>{1, 2, 3, 4} : std::vector<int>{1, 2, 3};
}

CellResult solve_cell(const ManufacturedProblem& problem, Method method,
                      std::shared_ptr<const Mesh> mesh, int p) {
  const auto start = std::chrono::steady_clock::now();
  CellResult cell;
  const Discretization disc =
      assemble_method(method, mesh, p, problem.coefficients, problem.forcing);
  cell.ndof = static_cast<int>(disc.system.rhs.size());
  try {
    const MethodSolution sol = solve_method(disc);
    if (problem.exact) {
      cell.norms = error_norms(method, sol.velocity, *problem.exact, problem.coefficients,
                               disc.pressure);
    } else {
      cell.norms.l2_norm = l2_norm(sol.velocity);
    }
    cell.ok = std::isfinite(cell.norms.l2_error) && std::isfinite(cell.norms.xh_error) &&
              std::isfinite(cell.norms.l2_norm);
    if (!cell.ok) cell.message = "non-finite norm";
  } catch (const SolverError& e) {
    cell.message = e.what();
  }
  cell.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

ManufacturedProblem with_overrides(ManufacturedProblem problem, const StudyOptions& options) {
  if (options.lambda_b) problem.coefficients.lambda_b = *options.lambda_b;
  if (options.lambda_n) problem.coefficients.lambda_n = *options.lambda_n;
  if (options.forcing_scale != 1.0) {
    const double scale = options.forcing_scale;
    problem.forcing = [f = problem.forcing, scale](const Vec2& x) -> Vec2 { return scale * f(x); };
  }
  return problem;
}

namespace {

/// Disc meshes by (geometry order, level), built by successive refinement.
class MeshCache {
 public:
  std::shared_ptr<const Mesh> get(int level, int g) {
    auto& chain = chains_[g];
    if (chain.empty()) chain.push_back(std::make_shared<const Mesh>(make_unit_disc_mesh(0, g)));
    while (static_cast<int>(chain.size()) <= level) {
      chain.push_back(std::make_shared<const Mesh>(refine(*chain.back())));
    }
    return chain[level];
  }

 private:
  std::map<int, std::vector<std::shared_ptr<const Mesh>>> chains_;
};

void log_cell(const StudyOptions& opt, const std::string& study, int p, double cs2, int level,
              Method m, const CellResult& cell) {
  if (!opt.log) return;
  std::ostream& os = *opt.log;
  os << study << " p=" << p << " cs2=" << cs2 << " level=" << level << ' ' << method_name(m)
     << " ndof=" << cell.ndof;
  if (cell.ok) {
    os << " l2_error=" << cell.norms.l2_error << " xh_error=" << cell.norms.xh_error
       << " l2_norm=" << cell.norms.l2_norm;
  } else {
    os << " FAILED: " << cell.message;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.2fs)", cell.seconds);
  os << buf << '\n';
}

/// Shared driver: one ManufacturedProblem per (p, cs2), all levels and methods.
StudyReport run_study(const std::string& name, const StudyOptions& opt, const std::vector<int>& ps,
                      const std::vector<double>& cs2s,
                      const std::function<ManufacturedProblem(int, double)>& make,
                      const std::vector<std::string>& metrics) {
  StudyReport report;
  report.study = name;
  MeshCache meshes;
  for (int p : ps) {
    const std::vector<int> levels = opt.levels.empty() ? default_levels(p) : opt.levels;
    const int g = opt.geom_order.value_or(default_geom_order(p));
    for (double cs2 : cs2s) {
      // The gate checks the closed forms; a forcing override breaks f = L u on purpose.
      const ManufacturedProblem base = make(p, cs2);
      gate_manufactured(base);
      const ManufacturedProblem problem = with_overrides(base, opt);
      for (int level : levels) {
        const auto mesh = meshes.get(level, g);
        const double h = mesh_size(*mesh);
        for (Method m : opt.methods) {
          if (!method_supports(m, p)) continue;
          const CellResult cell = solve_cell(problem, m, mesh, p);
          log_cell(opt, name, p, cs2, level, m, cell);
          if (!cell.ok) {
            std::ostringstream w;
            w << name << ": " << method_name(m) << " p=" << p << " cs2=" << cs2
              << " level=" << level << ": " << cell.message;
            report.warnings.push_back(w.str());
            continue;
          }
          for (const std::string& metric : metrics) {
            const double value = metric == "l2_error"   ? cell.norms.l2_error
                                 : metric == "xh_error" ? cell.norms.xh_error
                                                        : cell.norms.l2_norm;
            report.rows.push_back({h, p, cs2, m, metric, value});
          }
        }
      }
    }
  }
  report.sort_rows();

  std::ostringstream levels_text;
  for (int p : ps) {
    levels_text << "p=" << p << ":";
    for (int l : opt.levels.empty() ? default_levels(p) : opt.levels) levels_text << ' ' << l;
    levels_text << "; ";
  }
  report.metadata["study"] = name;
  report.metadata["version"] = version_string();
  report.metadata["domain"] = "unit disc, hexagon fan with red refinement";
  report.metadata["coefficients"] = "rho=1, b=0.1*(-y,x), |b|_inf=0.1";
  report.metadata["levels"] = levels_text.str();
  report.metadata["geom_order"] =
      opt.geom_order ? std::to_string(*opt.geom_order) : std::string("max(p, 2)");
  report.metadata["lambda_b"] = opt.lambda_b ? format_number(*opt.lambda_b) : "problem default";
  report.metadata["lambda_n"] = opt.lambda_n ? format_number(*opt.lambda_n) : "problem default";
  report.metadata["forcing_scale"] = format_number(opt.forcing_scale);
  if (opt.timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    report.metadata["timestamp"] = buf;
  }
  return report;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("cannot write " + path.string());
  return os;
}

void write_common(const StudyReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto os = open_output(dir / (report.study + "_report.csv"));
    write_long_csv(report, os);
  }
  nlohmann::json meta(report.metadata);
  meta["warnings"] = report.warnings;
  auto os = open_output(dir / (report.study + "_meta.json"));
  os << meta.dump(2) << '\n';
}

std::vector<PlotSeries> method_series(const StudyReport& report, int p, double cs2,
                                      const std::vector<Method>& methods,
                                      const std::string& metric) {
  std::vector<PlotSeries> out;
  for (Method m : methods) {
    auto pts = series_of(report, p, cs2, m, metric);
    if (pts.empty()) continue;
    out.push_back({std::string(method_name(m)) + " (" + std::string(method_suffix(m)) + ")",
                   std::move(pts)});
  }
  return out;
}

std::string slope_label(double slope) {
  std::ostringstream os;
  os << "O(h^" << slope << ")";
  return os.str();
}

}  // namespace

StudyReport run_convergence(const StudyOptions& opt) {
  const std::vector<int> ps = opt.degrees.empty() ? std::vector<int>{1, 2, 3, 4} : opt.degrees;
  StudyReport report = run_study("convergence", opt, ps, {1.0},
                                 [](int p, double) { return convergence_problem(p); },
                                 {"l2_error", "xh_error"});
  if (!opt.out_dir.empty()) {
    const fs::path dir(opt.out_dir);
    write_common(report, dir);
    {
      auto os = open_output(dir / "convergence.csv");
      write_wide_csv(report, TableKind::Convergence, "l2_error", os);
    }
    {
      auto os = open_output(dir / "convergence_xh.csv");
      write_wide_csv(report, TableKind::Convergence, "xh_error", os);
    }
    for (int p : ps) {
      auto os = open_output(dir / ("convergence_p" + std::to_string(p) + ".svg"));
      write_svg(os, "Convergence, p = " + std::to_string(p), "L2 error",
                method_series(report, p, 1.0, opt.methods, "l2_error"), p + 0.5,
                slope_label(p + 0.5));
    }
  }
  return report;
}

namespace {

StudyReport run_cs2_study(const std::string& name, const StudyOptions& opt, int default_p,
                          const std::function<ManufacturedProblem(int, double)>& make,
                          const std::vector<std::string>& metrics, TableKind kind,
                          const std::string& ylabel, bool reference_rate) {
  const int p = opt.degrees.empty() ? default_p : opt.degrees.front();
  const std::vector<double> cs2s =
      opt.cs2_values.empty() ? std::vector<double>{1.0, 10.0, 100.0, 1000.0} : opt.cs2_values;
  StudyReport report = run_study(name, opt, {p}, cs2s, make, metrics);
  if (!opt.out_dir.empty()) {
    const fs::path dir(opt.out_dir);
    write_common(report, dir);
    {
      auto os = open_output(dir / (name + ".csv"));
      write_wide_csv(report, kind, metrics.front(), os);
    }
    if (metrics.size() > 1) {
      auto os = open_output(dir / (name + "_xh.csv"));
      write_wide_csv(report, kind, metrics[1], os);
    }
    for (Method m : opt.methods) {
      if (!method_supports(m, p)) continue;
      std::vector<PlotSeries> series;
      for (double cs2 : cs2s) {
        auto pts = series_of(report, p, cs2, m, metrics.front());
        if (!pts.empty()) series.push_back({"cs2 = " + format_number(cs2), std::move(pts)});
      }
      const double slope = reference_rate ? p + 0.5 : 0.0;
      auto os = open_output(dir / (name + "_" + std::string(method_suffix(m)) + ".svg"));
      write_svg(os, name + " " + std::string(method_name(m)) + ", p = " + std::to_string(p),
                ylabel, series, slope, slope_label(slope));
    }
  }
  return report;
}

}  // namespace

StudyReport run_locking(const StudyOptions& opt) {
  return run_cs2_study("locking", opt, 2, [](int p, double cs2) { return locking_problem(p, cs2); },
                       {"l2_error", "xh_error"}, TableKind::Locking, "L2 error", true);
}

StudyReport run_gradrob(const StudyOptions& opt) {
  return run_cs2_study("gradrob", opt, 3, [](int p, double cs2) { return gradrob_problem(p, cs2); },
                       {"l2_norm"}, TableKind::Gradrob, "L2 norm of u_h", false);
}

DiagnosticsReport run_diagnostics(const DiagnosticsOptions& opt) {
  if (opt.level < 0) throw PreconditionError("diagnostics level must be >= 0");
  const double p2 = static_cast<double>(opt.p * opt.p);
  const CoefficientSet coeffs =
      rotating_flow_coefficients(1.0, opt.cs2, opt.flow_scale, opt.lambda_b.value_or(10.0 * p2),
                                 opt.lambda_n.value_or(100.0 * p2));
  const auto mesh =
      std::make_shared<const Mesh>(make_unit_disc_mesh(opt.level, opt.geom_order.value_or(default_geom_order(opt.p))));
  const DenseGrams grams = dense_method_grams(opt.method, mesh, opt.p, coeffs);
  DiagnosticsReport report;
  report.options = opt;
  report.ndof = static_cast<int>(grams.a.rows());
  const Eigen::VectorXd ea = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                 grams.a, Eigen::EigenvaluesOnly)
                                 .eigenvalues();
  const Eigen::VectorXd eb = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                 grams.b, Eigen::EigenvaluesOnly)
                                 .eigenvalues();
  report.min_eig_a = ea.minCoeff();
  report.min_eig_b = eb.minCoeff() / std::max(eb.cwiseAbs().maxCoeff(), 1e-300);
  report.control = estimate_control_constant(grams.a, grams.b);
  return report;
}

void write_diagnostics(const DiagnosticsReport& r, std::ostream& os) {
  nlohmann::json j;
  j["method"] = std::string(method_name(r.options.method));
  j["level"] = r.options.level;
  j["p"] = r.options.p;
  j["cs2"] = r.options.cs2;
  j["flow_scale"] = r.options.flow_scale;
  j["ndof"] = r.ndof;
  j["kernel_dim"] = r.control.kernel_dim;
  j["complement_dim"] = r.control.complement_dim;
  j["c_bh"] = r.control.c_bh;
  j["c_hat"] = r.control.c_hat ? nlohmann::json(*r.control.c_hat) : nlohmann::json(nullptr);
  j["min_eig_a"] = r.min_eig_a;
  j["min_eig_b_relative"] = r.min_eig_b;
  j["version"] = version_string();
  os << j.dump(2) << '\n';
}

}  // namespace galbrun
