#pragma once

// Synthetic 2D test fields and the noisy random-sampling experiment.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cosfit/approx.hpp"
#include "cosfit/io.hpp"

namespace cosfit {

enum class AnomalyKind { gaussian, box };

/// gaussian: a exp(-((x-cx)^2/sx^2 + (y-cy)^2/sy^2) / 2)
/// box:      a times a plateau of half-widths (sx, sy) with tanh edges of width `edge`
struct Anomaly {
  AnomalyKind kind = AnomalyKind::gaussian;
  double cx = 0.5;
  double cy = 0.5;
  double sx = 0.1;
  double sy = 0.1;
  double amplitude = 1.0;
  double edge = 0.02;

  double operator()(double x, double y) const;
};

struct FieldSpec {
  std::vector<Anomaly> anomalies;
  double operator()(double x, double y) const;
};

struct ExperimentSpec {
  FieldSpec field;
  std::size_t samples = 496;
  double noise_fraction = 0.05;
  std::uint64_t seed = 1;
  std::size_t grid = 150;
};

/// Three anisotropic Gaussian bumps, one of them close to the (1, 0) corner.
FieldSpec default_field();
ExperimentSpec default_experiment();

/// JSON form: {"samples":496,"noise":0.05,"seed":1,"grid":150,
///             "anomalies":[{"kind":"gaussian","cx":..,"cy":..,"sx":..,"sy":..,"amplitude":..}]}
/// Missing keys keep the defaults of default_experiment().
ExperimentSpec parse_experiment(const std::string& json_text);
ExperimentSpec load_experiment(const std::filesystem::path& path);

struct Experiment {
  SampleSet2D samples;
  std::vector<double> clean;  // field values at the sample points
  std::vector<double> noise;  // added noise, ||noise|| = noise_fraction ||clean||
  io::GridField reference;    // noiseless field on the (grid+1)^2 grid
};

/// Uniform random points in [0,1]^2 and Gaussian noise from a seeded
/// mt19937_64; identical specs give bit-identical experiments.
Experiment synth_experiment(const ExperimentSpec& spec);

/// Noiseless field tabulated on the grid (l/L, i/L).
io::GridField tabulate(const FieldSpec& field, std::size_t L);

}  // namespace cosfit
