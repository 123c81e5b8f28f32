#include "galbrun/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace galbrun {

namespace {

auto sort_key(const ReportRow& r) {
  return std::make_tuple(r.p, r.cs2, -r.h, static_cast<int>(r.method), r.metric);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw PreconditionError("malformed number '" + s + "'");
  return v;
}

std::string metric_prefix(TableKind kind) { return kind == TableKind::Gradrob ? "norm" : "error"; }

std::string key_column(TableKind kind) { return kind == TableKind::Convergence ? "p" : "cs"; }

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void StudyReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return sort_key(a) < sort_key(b); });
}

void write_long_csv(const StudyReport& report, std::ostream& os) {
  os << "h,p,cs2,method,metric,value\n";
  for (const ReportRow& r : report.rows) {
    os << format_number(r.h) << ',' << r.p << ',' << format_number(r.cs2) << ','
       << method_name(r.method) << ',' << r.metric << ',' << format_number(r.value) << '\n';
  }
}

std::vector<ReportRow> read_long_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "h,p,cs2,method,metric,value") {
    throw PreconditionError("unexpected long CSV header");
  }
  std::vector<ReportRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 6) throw PreconditionError("malformed long CSV line: " + line);
    rows.push_back({parse_double(cells[0]), std::stoi(cells[1]), parse_double(cells[2]),
                    parse_method(cells[3]), cells[4], parse_double(cells[5])});
  }
  return rows;
}

void write_wide_csv(const StudyReport& report, TableKind kind, const std::string& metric,
                    std::ostream& os) {
  const std::string prefix = metric_prefix(kind);
  os << "h," << key_column(kind);
  for (Method m : kAllMethods) os << ',' << prefix << method_suffix(m);
  os << '\n';
  // (key, -h) -> value per method
  std::map<std::pair<double, double>, std::array<std::optional<double>, 4>> table;
  for (const ReportRow& r : report.rows) {
    if (r.metric != metric) continue;
    const double key = kind == TableKind::Convergence ? static_cast<double>(r.p) : r.cs2;
    table[{key, -r.h}][static_cast<int>(r.method)] = r.value;
  }
  for (const auto& [key, values] : table) {
    os << format_number(-key.second) << ','
       << (kind == TableKind::Convergence ? std::to_string(static_cast<int>(key.first))
                                          : format_number(key.first));
    for (const auto& v : values) {
      os << ',';
      if (v) os << format_number(*v);
    }
    os << '\n';
  }
}

std::vector<ReportRow> read_wide_csv(std::istream& is, TableKind kind, const std::string& metric,
                                     double fixed) {
  std::string line;
  std::ostringstream expected;
  expected << "h," << key_column(kind);
  for (Method m : kAllMethods) expected << ',' << metric_prefix(kind) << method_suffix(m);
  if (!std::getline(is, line) || line != expected.str()) {
    throw PreconditionError("unexpected wide CSV header: " + line);
  }
  std::vector<ReportRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 6) throw PreconditionError("malformed wide CSV line: " + line);
    const double h = parse_double(cells[0]);
    const double key = parse_double(cells[1]);
    for (int m = 0; m < 4; ++m) {
      if (cells[2 + m].empty()) continue;
      ReportRow r;
      r.h = h;
      r.p = kind == TableKind::Convergence ? static_cast<int>(key) : static_cast<int>(fixed);
      r.cs2 = kind == TableKind::Convergence ? fixed : key;
      r.method = kAllMethods[m];
      r.metric = metric;
      r.value = parse_double(cells[2 + m]);
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<std::pair<double, double>> series_of(const StudyReport& report, int p, double cs2,
                                                 Method method, const std::string& metric) {
  std::vector<std::pair<double, double>> out;
  for (const ReportRow& r : report.rows) {
    if (r.p == p && r.cs2 == cs2 && r.method == method && r.metric == metric) {
      out.emplace_back(r.h, r.value);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

double fit_slope(const std::vector<std::pair<double, double>>& points, int count) {
  std::vector<std::pair<double, double>> logs;
  const int start = std::max(0, static_cast<int>(points.size()) - count);
  for (int i = start; i < static_cast<int>(points.size()); ++i) {
    const auto [h, v] = points[i];
    if (h > 0.0 && v > 0.0 && std::isfinite(v)) logs.emplace_back(std::log(h), std::log(v));
  }
  if (logs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(logs.size());
  my /= static_cast<double>(logs.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : logs) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

void write_svg(std::ostream& os, const std::string& title, const std::string& ylabel,
               const std::vector<PlotSeries>& series, double reference_slope,
               const std::string& reference_label) {
  constexpr double kWidth = 640, kHeight = 480, kLeft = 80, kRight = 160, kTop = 40,
                   kBottom = 60;
  double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0;
  double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  for (const auto& s : series) {
    for (const auto& [h, v] : s.points) {
      if (!(h > 0.0) || !(v > 0.0)) continue;
      hmin = std::min(hmin, h);
      hmax = std::max(hmax, h);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (!(hmax > 0.0)) {
    hmin = 0.1;
    hmax = 1.0;
  }
  if (!(vmax > 0.0)) {
    vmin = 0.1;
    vmax = 1.0;
  }
  if (hmin == hmax) {
    hmin /= 2.0;
    hmax *= 2.0;
  }
  if (vmin == vmax) {
    vmin /= 2.0;
    vmax *= 2.0;
  }
  const double lh0 = std::log10(hmax), lh1 = std::log10(hmin);
  const double lv0 = std::log10(vmin) - 0.1, lv1 = std::log10(vmax) + 0.1;
  const auto px = [&](double h) {
    return kLeft + (std::log10(h) - lh0) / (lh1 - lh0) * (kWidth - kLeft - kRight);
  };
  const auto py = [&](double v) {
    return kHeight - kBottom - (std::log10(v) - lv0) / (lv1 - lv0) * (kHeight - kTop - kBottom);
  };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << title << "</text>\n"
     << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
     << "\" height=\"" << kHeight - kTop - kBottom
     << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\" font-size=\"13\">h</text>\n"
     << "<text x=\"20\" y=\"" << kHeight / 2 << "\" font-size=\"13\" transform=\"rotate(-90 20 "
     << kHeight / 2 << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  // Decade ticks.
  for (int d = static_cast<int>(std::floor(lv0)); d <= static_cast<int>(std::ceil(lv1)); ++d) {
    const double v = std::pow(10.0, d);
    if (std::log10(v) < lv0 || std::log10(v) > lv1) continue;
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py(v) + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
  }
  for (const auto& s : series) {
    for (const auto& [h, v] : s.points) {
      (void)v;
      os << "<text x=\"" << fmt(px(h)) << "\" y=\"" << kHeight - kBottom + 16
         << "\" text-anchor=\"middle\" font-size=\"11\">" << format_number(h).substr(0, 6)
         << "</text>\n";
    }
    break;
  }
  int index = 0;
  for (const auto& s : series) {
    const char* color = kColors[index % 8];
    os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& [h, v] : s.points) {
      if (!(h > 0.0) || !(v > 0.0)) continue;
      os << (first ? "" : " ") << fmt(px(h)) << ',' << fmt(py(v));
      first = false;
    }
    os << "\"/>\n";
    const double ly = kTop + 20.0 + 20.0 * index;
    os << "<text x=\"" << kWidth - kRight + 10 << "\" y=\"" << fmt(ly) << "\" fill=\"" << color
       << "\" font-size=\"12\">" << s.label << "</text>\n";
    ++index;
  }
  // Reference line through the first point of the first series.
  double h0 = hmax, v0 = std::sqrt(vmin * vmax);
  if (!series.empty() && !series.front().points.empty() &&
      series.front().points.front().second > 0.0) {
    h0 = series.front().points.front().first;
    v0 = series.front().points.front().second;
  }
  const double v_end = v0 * std::pow(hmin / h0, reference_slope);
  os << "<polyline class=\"reference\" fill=\"none\" stroke=\"gray\" stroke-width=\"1.5\" "
        "stroke-dasharray=\"6,4\" points=\""
     << fmt(px(h0)) << ',' << fmt(py(v0)) << ' ' << fmt(px(hmin)) << ',' << fmt(py(v_end))
     << "\"/>\n";
  os << "<text x=\"" << kWidth - kRight + 10 << "\" y=\"" << fmt(kTop + 20.0 + 20.0 * index)
     << "\" fill=\"gray\" font-size=\"12\">" << reference_label << "</text>\n";
  os << "</svg>\n";
}

}  // namespace galbrun
