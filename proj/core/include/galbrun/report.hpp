#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "galbrun/methods.hpp"

namespace galbrun {

/// One measured quantity of one (h, p, cs2, method) cell.
struct ReportRow {
  double h = 0.0;
  int p = 1;
  double cs2 = 1.0;
  Method method = Method::M1;
  std::string metric;  // "l2_error", "xh_error", "l2_norm"
  double value = 0.0;

  bool operator==(const ReportRow&) const = default;
};

struct StudyReport {
  std::string study;                          // convergence | locking | gradrob
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> warnings;          // failed cells

  /// Sorts by (p, cs2, descending h, method, metric).
  void sort_rows();
  bool operator==(const StudyReport&) const = default;
};

/// Long format "h,p,cs2,method,metric,value", one row per ReportRow, values
/// printed with 17 significant digits.
void write_long_csv(const StudyReport& report, std::ostream& os);
std::vector<ReportRow> read_long_csv(std::istream& is);

/// Layout of the wide per-method figure tables.
enum class TableKind {
  Convergence,  // h,p,error<M>...   (metric l2_error or xh_error)
  Locking,      // h,cs,error<M>...  (metric l2_error or xh_error)
  Gradrob,      // h,cs,norm<M>...   (metric l2_norm)
};

/// One line per (key, h); an empty cell where a method has no value.
void write_wide_csv(const StudyReport& report, TableKind kind, const std::string& metric,
                    std::ostream& os);

/// Inverse of write_wide_csv. The column not present in the table (cs2 for
/// Convergence, p otherwise) is taken from `fixed`.
std::vector<ReportRow> read_wide_csv(std::istream& is, TableKind kind, const std::string& metric,
                                     double fixed);

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (h, value)
};

/// Log-log SVG 1.1 plot, h decreasing to the right. One polyline per series
/// and one dashed reference line of the given slope through the first point
/// of the first series.
void write_svg(std::ostream& os, const std::string& title, const std::string& ylabel,
               const std::vector<PlotSeries>& series, double reference_slope,
               const std::string& reference_label);

/// Least-squares slope of log(value) against log(h) over the last `count`
/// points in the given order. NaN when fewer than 2 usable points.
double fit_slope(const std::vector<std::pair<double, double>>& points, int count = 3);

/// Values of one (p, cs2, method, metric) series ordered by descending h.
std::vector<std::pair<double, double>> series_of(const StudyReport& report, int p, double cs2,
                                                 Method method, const std::string& metric);

/// %.17g
std::string format_number(double value);

}  // namespace galbrun
