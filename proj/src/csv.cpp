#include "roughreflect/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "roughreflect/errors.hpp"

namespace roughreflect {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw ArgumentError("CSV: cannot parse number '" + cell + "'");
    }
  }
  return out;
}

std::vector<std::vector<double>> read_rows(std::istream& is, std::size_t& columns) {
  std::string line;
  if (!std::getline(is, line)) throw ArgumentError("CSV: empty input");
  columns = 1;
  for (char c : line) columns += (c == ',');
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    auto r = parse_row(line);
    if (r.size() != columns) throw ArgumentError("CSV: ragged row");
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ArgumentError("CSV: no data rows");
  return rows;
}

double recover_step(double first, double last, std::size_t intervals) {
  if (intervals == 0) throw ArgumentError("CSV: cannot infer the step from a single time");
  return (last - first) / static_cast<double>(intervals);
}

}  // namespace

void write_path(std::ostream& os, const GridPath& p, const std::string& prefix) {
  write_paths(os, {&p}, {prefix});
}

void write_paths(std::ostream& os, const std::vector<const GridPath*>& paths, const std::vector<std::string>& prefixes) {
  if (paths.empty() || paths.size() != prefixes.size()) throw ArgumentError("write_paths: bad arguments");
  const Grid& g = paths.front()->grid();
  for (const auto* p : paths) {
    if (!(p->grid() == g)) throw ArgumentError("write_paths: grids differ");
  }
  os << 't';
  for (std::size_t q = 0; q < paths.size(); ++q) {
    for (std::size_t i = 0; i < paths[q]->dim(); ++i) os << ',' << prefixes[q] << (i + 1);
  }
  os << '\n';
  for (std::size_t k = 0; k < g.size(); ++k) {
    os << format_double(g.time(k));
    for (const auto* p : paths) {
      for (double v : p->point(k)) os << ',' << format_double(v);
    }
    os << '\n';
  }
}

GridPath read_path(std::istream& is, std::optional<double> step) {
  std::size_t cols = 0;
  auto rows = read_rows(is, cols);
  if (cols < 2) throw ArgumentError("CSV path needs a time column and at least one value column");
  const double h = step ? *step : recover_step(rows.front()[0], rows.back()[0], rows.size() - 1);
  Grid probe(h, 0, 1);
  const std::int64_t j0 = probe.lattice(rows.front()[0]);
  Grid g(h, j0, rows.size());
  const std::size_t d = cols - 1;
  GridPath p(g, d);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (probe.lattice(rows[k][0]) != j0 + static_cast<std::int64_t>(k)) {
      throw AlignmentError("CSV path times are not consecutive grid points");
    }
    for (std::size_t i = 0; i < d; ++i) p(k, i) = rows[k][i + 1];
  }
  p.require_finite();
  return p;
}

void write_field(std::ostream& os, const TwoParamField& g) {
  os << "s,t";
  for (std::size_t a = 0; a < g.rows(); ++a) {
    for (std::size_t b = 0; b < g.cols(); ++b) os << ",g" << (a + 1) << (b + 1);
  }
  os << '\n';
  const std::size_t n = g.grid().size();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      os << format_double(g.grid().time(s)) << ',' << format_double(g.grid().time(t));
      for (double v : g.at(s, t)) os << ',' << format_double(v);
      os << '\n';
    }
  }
}

TwoParamField read_field(std::istream& is, std::size_t rows, std::size_t cols, std::optional<double> step) {
  std::size_t ncol = 0;
  auto data = read_rows(is, ncol);
  if (ncol != 2 + rows * cols) throw ArgumentError("CSV field has the wrong number of columns");
  double tmin = data.front()[0], tmax = data.front()[1];
  for (const auto& r : data) {
    tmin = std::min(tmin, r[0]);
    tmax = std::max(tmax, r[1]);
  }
  // n points give n(n-1)/2 pairs
  const auto m = static_cast<double>(data.size());
  const auto n = static_cast<std::size_t>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * m)) / 2.0));
  if (n * (n - 1) / 2 != data.size()) throw ArgumentError("CSV field does not cover every ordered pair");
  const double h = step ? *step : recover_step(tmin, tmax, n - 1);
  Grid probe(h, 0, 1);
  const std::int64_t j0 = probe.lattice(tmin);
  TwoParamField f(Grid(h, j0, n), rows, cols);
  for (const auto& r : data) {
    const std::int64_t a = probe.lattice(r[0]) - j0, b = probe.lattice(r[1]) - j0;
    if (a < 0 || b <= a || b >= static_cast<std::int64_t>(n)) throw ArgumentError("CSV field pair out of order");
    auto dst = f.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    for (std::size_t q = 0; q < rows * cols; ++q) dst[q] = r[2 + q];
  }
  return f;
}

void write_path_file(const std::string& path, const GridPath& p, const std::string& prefix) {
  std::ofstream os(path);
  if (!os) throw ArgumentError("cannot open " + path + " for writing");
  write_path(os, p, prefix);
}

GridPath read_path_file(const std::string& path, std::optional<double> step) {
  std::ifstream is(path);
  if (!is) throw ArgumentError("cannot open " + path);
  return read_path(is, step);
}

void write_field_file(const std::string& path, const TwoParamField& g) {
  std::ofstream os(path);
  if (!os) throw ArgumentError("cannot open " + path + " for writing");
  write_field(os, g);
}

TwoParamField read_field_file(const std::string& path, std::size_t rows, std::size_t cols, std::optional<double> step) {
  std::ifstream is(path);
  if (!is) throw ArgumentError("cannot open " + path);
  return read_field(is, rows, cols, step);
}

}  // namespace roughreflect
