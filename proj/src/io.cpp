#include "cosfit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>
#include <utility>

#include "cosfit/error.hpp"

namespace cosfit::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_number(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size() && std::isfinite(out);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool matches_header(const std::vector<std::string_view>& fields, const std::vector<std::string>& names,
                    std::size_t optional_extra, std::string_view extra_name) {
  if (fields.size() != names.size() && fields.size() != names.size() + optional_extra) return false;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (lower(fields[i]) != names[i]) return false;
  }
  return fields.size() == names.size() || lower(fields.back()) == extra_name;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

// Visits the non-blank, non-comment lines with 1-based line numbers.
template <class F>
void for_each_line(std::istream& in, F&& f) {
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    f(lineno, line);
  }
}

AxisMap fit_axis(std::span<const double> v) {
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  if (*mn >= 0.0 && *mx <= 1.0) return {};
  AxisMap m{*mn, *mx};
  if (m.hi == m.lo) m.hi = m.lo + 1.0;
  return m;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// ------------------------------------------------------------ samples

Dataset parse_samples(std::istream& in, std::size_t dim, const IngestOptions& options, const std::string& source) {
  if (dim != 1 && dim != 2) throw InvalidArgument("dimension must be 1 or 2");
  const std::vector<std::string> names = dim == 1 ? std::vector<std::string>{"x", "value"}
                                                  : std::vector<std::string>{"x", "y", "value"};
  Dataset d;
  d.dim = dim;
  std::size_t columns = 0;
  bool first = true;
  for_each_line(in, [&](std::size_t lineno, std::string_view line) {
    if (line.front() == '#') return;
    const auto fields = split(line);
    if (first && matches_header(fields, names, 1, "weight")) {
      first = false;
      return;
    }
    first = false;
    if (fields.size() != dim + 1 && fields.size() != dim + 2) {
      fail(source, lineno, "expected " + std::to_string(dim + 1) + " or " + std::to_string(dim + 2) +
                               " columns, found " + std::to_string(fields.size()));
    }
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns) fail(source, lineno, "inconsistent column count");
    double vals[4];
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_number(fields[i], vals[i])) {
        fail(source, lineno, "column " + std::to_string(i + 1) + ": not a finite number: '" +
                                 std::string(fields[i]) + "'");
      }
    }
    d.x.push_back(vals[0]);
    if (dim == 2) d.y.push_back(vals[1]);
    d.values.push_back(vals[dim]);
    if (columns == dim + 2) {
      if (!(vals[dim + 1] > 0.0)) fail(source, lineno, "weight must be positive");
      d.weights.push_back(vals[dim + 1]);
    }
  });
  if (d.values.empty()) throw DataError(source + ": no samples");

  // Order (1D: ascending x) and group coincident locations.
  const std::size_t r = d.values.size();
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  if (dim == 1) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d.x[a] < d.x[b]; });
  }
  auto key = [&](std::size_t i) { return std::pair(d.x[i], dim == 2 ? d.y[i] : 0.0); };
  std::map<std::pair<double, double>, std::size_t> seen;
  Dataset out;
  out.dim = dim;
  std::vector<std::size_t> counts;
  for (std::size_t i : order) {
    const auto [it, inserted] = seen.emplace(key(i), out.values.size());
    if (!inserted) {
      if (!options.merge_duplicates) {
        std::ostringstream msg;
        msg << source << ": duplicate sample location x=" << format_double(d.x[i]);
        if (dim == 2) msg << ", y=" << format_double(d.y[i]);
        throw DataError(msg.str());
      }
      const std::size_t t = it->second;
      out.values[t] += d.values[i];
      if (!d.weights.empty()) out.weights[t] += d.weights[i];
      ++counts[t];
      continue;
    }
    out.x.push_back(d.x[i]);
    if (dim == 2) out.y.push_back(d.y[i]);
    out.values.push_back(d.values[i]);
    if (!d.weights.empty()) out.weights.push_back(d.weights[i]);
    counts.push_back(1);
  }
  for (std::size_t t = 0; t < out.values.size(); ++t) out.values[t] /= static_cast<double>(counts[t]);

  out.x_map = fit_axis(out.x);
  for (double& v : out.x) v = out.x_map.to_unit(v);
  if (dim == 2) {
    out.y_map = fit_axis(out.y);
    for (double& v : out.y) v = out.y_map.to_unit(v);
  }
  return out;
}

Dataset ingest_csv(const std::filesystem::path& path, std::size_t dim, const IngestOptions& options) {
  auto in = open_in(path);
  return parse_samples(in, dim, options, path.string());
}

SampleSet1D to_samples_1d(const Dataset& data, WeightPolicy policy) {
  if (data.dim != 1) throw InvalidArgument("to_samples_1d: dataset is not 1D");
  try {
    PointSet1D pts(data.x);
    std::vector<double> w;
    if (policy == WeightPolicy::uniform) {
      w = uniform_weights(pts.size());
    } else if (policy == WeightPolicy::automatic && !data.weights.empty()) {
      w = data.weights;
    } else {
      w = midpoint_weights(pts);
    }
    return SampleSet1D(std::move(pts), data.values, std::move(w));
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
}

SampleSet2D to_samples_2d(const Dataset& data, WeightPolicy policy) {
  if (data.dim != 2) throw InvalidArgument("to_samples_2d: dataset is not 2D");
  if (policy == WeightPolicy::midpoint) throw InvalidArgument("midpoint weights are defined for 1D data only");
  try {
    PointSet2D pts(data.x, data.y);
    std::vector<double> w = (policy == WeightPolicy::automatic && !data.weights.empty())
                                ? data.weights
                                : uniform_weights(pts.size());
    return SampleSet2D(std::move(pts), data.values, std::move(w));
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
}

// ------------------------------------------------------------ coefficients

namespace {

void write_domain(std::ostream& out, char axis, const AxisMap& m) {
  out << "# domain," << axis << ',' << format_double(m.lo) << ',' << format_double(m.hi) << '\n';
}

}  // namespace

void write_coefficients(std::ostream& out, const CosinePoly1D& poly, const AxisMap& x_map) {
  out << "# degree," << poly.degree() << '\n';
  out << "# coefficients," << poly.degree() + 1 << '\n';
  write_domain(out, 'x', x_map);
  out << "k,coefficient\n";
  for (std::size_t k = 0; k <= poly.degree(); ++k) out << k << ',' << format_double(poly[k]) << '\n';
}

void write_coefficients(std::ostream& out, const CosinePoly2D& poly, const AxisMap& x_map, const AxisMap& y_map) {
  out << "# degree," << poly.degree_x() << ',' << poly.degree_y() << '\n';
  out << "# coefficients," << poly.size() << '\n';
  write_domain(out, 'x', x_map);
  write_domain(out, 'y', y_map);
  out << "k,l,coefficient\n";
  for (std::size_t l = 0; l <= poly.degree_y(); ++l) {
    for (std::size_t k = 0; k <= poly.degree_x(); ++k) {
      out << k << ',' << l << ',' << format_double(poly(k, l)) << '\n';
    }
  }
}

CoefficientFile read_coefficients(std::istream& in, const std::string& source) {
  CoefficientFile f;
  f.dim = 0;
  struct Entry {
    std::size_t k, l;
    double c;
    std::size_t line;
  };
  std::vector<Entry> entries;
  bool header_allowed = true;
  for_each_line(in, [&](std::size_t lineno, std::string_view line) {
    if (line.front() == '#') {
      const auto fields = split(trim(line.substr(1)));
      if (fields.size() == 4 && fields[0] == "domain") {
        AxisMap m;
        if (!parse_number(fields[2], m.lo) || !parse_number(fields[3], m.hi) || !(m.hi > m.lo)) {
          fail(source, lineno, "malformed domain line");
        }
        if (fields[1] == "x") f.x_map = m;
        else if (fields[1] == "y") f.y_map = m;
        else fail(source, lineno, "unknown domain axis");
      }
      return;
    }
    const auto fields = split(line);
    if (header_allowed) {
      header_allowed = false;
      if (matches_header(fields, {"k", "coefficient"}, 0, "")) {
        f.dim = 1;
        return;
      }
      if (matches_header(fields, {"k", "l", "coefficient"}, 0, "")) {
        f.dim = 2;
        return;
      }
    }
    if (f.dim == 0) f.dim = fields.size() - 1;
    if (fields.size() != f.dim + 1 || (f.dim != 1 && f.dim != 2)) fail(source, lineno, "unexpected column count");
    double k = 0, l = 0, c = 0;
    const bool ok = parse_number(fields[0], k) && (f.dim == 1 || parse_number(fields[1], l)) &&
                    parse_number(fields[f.dim], c);
    if (!ok || k < 0 || l < 0 || k != std::floor(k) || l != std::floor(l) || k > 1e7 || l > 1e7) {
      fail(source, lineno, "malformed coefficient row");
    }
    entries.push_back({static_cast<std::size_t>(k), static_cast<std::size_t>(l), c, lineno});
  });
  if (entries.empty()) throw DataError(source + ": no coefficients");

  std::size_t mx = 0, my = 0;
  for (const auto& e : entries) {
    mx = std::max(mx, e.k);
    my = std::max(my, e.l);
  }
  std::vector<double> c((mx + 1) * (my + 1), 0.0);
  std::vector<bool> set(c.size(), false);
  for (const auto& e : entries) {
    const std::size_t idx = e.l * (mx + 1) + e.k;
    if (set[idx]) fail(source, e.line, "duplicate coefficient index");
    set[idx] = true;
    c[idx] = e.c;
  }
  if (f.dim == 1) f.poly1 = CosinePoly1D(std::move(c));
  else f.poly2 = CosinePoly2D(mx, my, std::move(c));
  return f;
}

CoefficientFile read_coefficients(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_coefficients(in, path.string());
}

// ------------------------------------------------------------ grids

GridField evaluate_on_grid(const CosinePoly1D& poly, std::size_t L, const AxisMap& x_map) {
  if (L < 1) throw InvalidArgument("grid resolution L must be at least 1");
  GridField g;
  g.dim = 1;
  g.nx = L + 1;
  g.values = eval_poly_grid(poly, L);
  g.x.resize(g.nx);
  for (std::size_t l = 0; l <= L; ++l) g.x[l] = x_map.from_unit(static_cast<double>(l) / static_cast<double>(L));
  g.provenance = Provenance::fit;
  return g;
}

GridField evaluate_on_grid(const CosinePoly2D& poly, std::size_t Lx, std::size_t Ly, const AxisMap& x_map,
                           const AxisMap& y_map) {
  if (Lx < 1 || Ly < 1) throw InvalidArgument("grid resolution L must be at least 1");
  GridField g;
  g.dim = 2;
  g.nx = Lx + 1;
  g.ny = Ly + 1;
  g.values = eval_poly_2d_grid(poly, Lx, Ly).values();
  g.x.resize(g.nx * g.ny);
  g.y.resize(g.nx * g.ny);
  for (std::size_t i = 0; i < g.ny; ++i) {
    const double yv = y_map.from_unit(static_cast<double>(i) / static_cast<double>(Ly));
    for (std::size_t k = 0; k < g.nx; ++k) {
      g.x[i * g.nx + k] = x_map.from_unit(static_cast<double>(k) / static_cast<double>(Lx));
      g.y[i * g.nx + k] = yv;
    }
  }
  g.provenance = Provenance::fit;
  return g;
}

void write_grid(std::ostream& out, const GridField& field) {
  out << (field.dim == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    out << format_double(field.x[i]) << ',';
    if (field.dim == 2) out << format_double(field.y[i]) << ',';
    out << format_double(field.values[i]) << '\n';
  }
}

GridField read_grid(std::istream& in, std::size_t dim, const std::string& source) {
  if (dim != 1 && dim != 2) throw InvalidArgument("dimension must be 1 or 2");
  GridField g;
  g.dim = dim;
  bool first = true;
  for_each_line(in, [&](std::size_t lineno, std::string_view line) {
    if (line.front() == '#') return;
    const auto fields = split(line);
    if (first) {
      first = false;
      if (matches_header(fields, dim == 1 ? std::vector<std::string>{"x", "value"}
                                          : std::vector<std::string>{"x", "y", "value"},
                         0, "")) {
        return;
      }
    }
    if (fields.size() != dim + 1) fail(source, lineno, "expected " + std::to_string(dim + 1) + " columns");
    double v[3];
    for (std::size_t i = 0; i <= dim; ++i) {
      if (!parse_number(fields[i], v[i])) fail(source, lineno, "not a finite number: '" + std::string(fields[i]) + "'");
    }
    g.x.push_back(v[0]);
    if (dim == 2) g.y.push_back(v[1]);
    g.values.push_back(v[dim]);
  });
  if (g.values.empty()) throw DataError(source + ": empty grid");
  if (dim == 1) {
    g.nx = g.values.size();
  } else {
    g.nx = 0;
    while (g.nx < g.y.size() && g.y[g.nx] == g.y[0]) ++g.nx;
    if (g.values.size() % g.nx != 0) throw DataError(source + ": grid rows have unequal length");
    g.ny = g.values.size() / g.nx;
  }
  return g;
}

GridField read_grid(const std::filesystem::path& path, std::size_t dim) {
  auto in = open_in(path);
  return read_grid(in, dim, path.string());
}

double relative_l2_error(const GridField& fit, const GridField& reference) {
  if (fit.dim != reference.dim || fit.nx != reference.nx || fit.ny != reference.ny ||
      fit.values.size() != reference.values.size()) {
    throw InvalidArgument("relative_l2_error: grid shapes differ");
  }
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  for (std::size_t i = 0; i < fit.x.size() && i < reference.x.size(); ++i) {
    if (!close(fit.x[i], reference.x[i]) || (fit.dim == 2 && !close(fit.y[i], reference.y[i]))) {
      throw InvalidArgument("relative_l2_error: grid node " + std::to_string(i) + " differs");
    }
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < fit.values.size(); ++i) {
    const double d = reference.values[i] - fit.values[i];
    num += d * d;
    den += reference.values[i] * reference.values[i];
  }
  if (den == 0.0) throw InvalidArgument("relative_l2_error: reference field has zero norm");
  return std::sqrt(num / den);
}

void write_pgm(std::ostream& out, const GridField& field) {
  if (field.values.empty()) throw InvalidArgument("write_pgm: empty field");
  const auto [mn, mx] = std::minmax_element(field.values.begin(), field.values.end());
  const double lo = *mn, hi = *mx;
  out << "P2\n# gray 0 = " << format_double(lo) << ", gray 255 = " << format_double(hi) << '\n';
  out << field.nx << ' ' << field.ny << "\n255\n";
  for (std::size_t row = 0; row < field.ny; ++row) {
    const std::size_t i = field.ny - 1 - row;
    for (std::size_t k = 0; k < field.nx; ++k) {
      const double v = field.values[i * field.nx + k];
      const long gray = hi > lo ? std::lround(255.0 * (v - lo) / (hi - lo)) : 128;
      out << gray << ((k + 1) % 16 == 0 || k + 1 == field.nx ? '\n' : ' ');
    }
  }
}

}  // namespace cosfit::io
