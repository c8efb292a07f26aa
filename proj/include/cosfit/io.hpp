#pragma once

// CSV ingestion and export: sample files, coefficient files, grid fields and
// PGM heatmaps. Every numeric field is written with 17 significant digits so
// files read back bit-identically.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cosfit/approx.hpp"

namespace cosfit::io {

/// Affine map between an original coordinate interval [lo, hi] and [0, 1].
struct AxisMap {
  double lo = 0.0;
  double hi = 1.0;

  double to_unit(double v) const { return (v - lo) / (hi - lo); }
  double from_unit(double t) const { return lo + t * (hi - lo); }
  bool identity() const { return lo == 0.0 && hi == 1.0; }
};

struct IngestOptions {
  // Average values at coincident locations (weights add) instead of rejecting them.
  bool merge_duplicates = false;
};

/// Parsed sample file, coordinates already mapped into [0, 1]^dim (sorted in 1D).
struct Dataset {
  std::size_t dim = 1;
  std::vector<double> x;
  std::vector<double> y;        // empty in 1D
  std::vector<double> values;
  std::vector<double> weights;  // empty unless the file has a weight column
  AxisMap x_map;
  AxisMap y_map;

  std::size_t size() const { return values.size(); }
};

Dataset parse_samples(std::istream& in, std::size_t dim, const IngestOptions& options = {},
                      const std::string& source = "<input>");
Dataset ingest_csv(const std::filesystem::path& path, std::size_t dim, const IngestOptions& options = {});

enum class WeightPolicy { automatic, midpoint, uniform };

/// automatic: weights from the file if present, else midpoint (1D) / uniform (2D).
SampleSet1D to_samples_1d(const Dataset& data, WeightPolicy policy = WeightPolicy::automatic);
SampleSet2D to_samples_2d(const Dataset& data, WeightPolicy policy = WeightPolicy::automatic);

// ------------------------------------------------------------ coefficients

struct CoefficientFile {
  std::size_t dim = 1;
  CosinePoly1D poly1;
  CosinePoly2D poly2;
  AxisMap x_map;
  AxisMap y_map;
};

void write_coefficients(std::ostream& out, const CosinePoly1D& poly, const AxisMap& x_map = {});
void write_coefficients(std::ostream& out, const CosinePoly2D& poly, const AxisMap& x_map = {},
                        const AxisMap& y_map = {});
CoefficientFile read_coefficients(std::istream& in, const std::string& source = "<input>");
CoefficientFile read_coefficients(const std::filesystem::path& path);

// ------------------------------------------------------------ grid fields

/// Grid t_l = l / L per axis (L + 1 nodes).
struct GridSpec {
  std::size_t dim = 1;
  std::size_t lx = 150;
  std::size_t ly = 150;  // ignored in 1D
};

enum class Provenance { fit, reference, unknown };

/// Values on a regular grid. Nodes are ordered with x fastest; in 1D ny = 1.
struct GridField {
  std::size_t dim = 1;
  std::size_t nx = 0;
  std::size_t ny = 1;
  std::vector<double> x;       // node coordinates (original units), length nx * ny
  std::vector<double> y;       // 2D only
  std::vector<double> values;
  Provenance provenance = Provenance::unknown;
};

GridField evaluate_on_grid(const CosinePoly1D& poly, std::size_t L, const AxisMap& x_map = {});
GridField evaluate_on_grid(const CosinePoly2D& poly, std::size_t Lx, std::size_t Ly, const AxisMap& x_map = {},
                           const AxisMap& y_map = {});

void write_grid(std::ostream& out, const GridField& field);
GridField read_grid(std::istream& in, std::size_t dim, const std::string& source = "<input>");
GridField read_grid(const std::filesystem::path& path, std::size_t dim);

/// ||ref - fit||_2 / ||ref||_2 over all nodes. Throws on grid mismatch or a zero reference.
double relative_l2_error(const GridField& fit, const GridField& reference);

/// ASCII PGM (P2, maxval 255), min-max linear gray mapping recorded in a comment.
/// Row 0 of the image is the largest y.
void write_pgm(std::ostream& out, const GridField& field);

/// Shortest-safe 17-significant-digit rendering used by every writer.
std::string format_double(double v);

}  // namespace cosfit::io
