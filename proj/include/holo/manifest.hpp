#pragma once

// Experiment manifests: a JSON document with a fixed set of keys. Unknown
// keys are errors at every level; all errors are collected before failing.
//
// {
//   "family":         {"name": "poincare2d", "params": {"x0": 0.05}},
//   "chart":          {"margin": 0.02, "grid": 21},
//   "basepoint":      [0.05, 0.0],
//   "ks":             [2, 4, 8, 16, 32],
//   "loops":          {"square_scales": [0.02, 0.05], "circle_radii": [0.1],
//                      "random_count": 8, "random_amplitude": 0.1, "seed": 7},
//   "integrator":     {"steps": 2048},
//   "estimation":     {"gap_threshold": 1e-4, "closure_passes": 1, "generator_eps": 0.01},
//   "classification": {"target": "so2_block", "restarts": 32, "tol": 1e-6},
//   "outputs":        {"directory": "out/poincare"}
// }
//
// Only "family" and "ks" are required.

#include "holo/config.hpp"
#include "holo/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace holo {

class ManifestError : public std::runtime_error {
 public:
  explicit ManifestError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ExperimentManifest {
  std::string family;
  FamilyParams family_params;
  std::optional<double> chart_margin;
  int grid = defaults::grid;
  std::optional<Point> basepoint;
  std::vector<int> ks;

  std::vector<double> square_scales{0.02, 0.05};
  std::vector<double> circle_radii{0.1};
  int random_count = defaults::random_loops;
  double random_amplitude = defaults::random_amplitude;
  std::uint64_t seed = 1;

  int steps = defaults::steps;

  double gap_threshold = defaults::gap_threshold;
  int closure_passes = defaults::closure_passes;
  double generator_eps = defaults::generator_eps;

  std::string target = "so2_block";
  int restarts = defaults::restarts;
  double tol = defaults::classification_tol;

  std::string output_dir;  ///< empty: HOLONOMY_OUTPUT_DIR or "holonomy_out"
};

/// Values given on the command line take precedence over the manifest.
struct ManifestOverrides {
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<std::string> output_dir;
};

ExperimentManifest parse_manifest(const std::string& json_text);
ExperimentManifest load_manifest(const std::filesystem::path& path);
void apply_overrides(ExperimentManifest& manifest, const ManifestOverrides& overrides);

/// Builds the family with chart/basepoint overrides applied.
MetricFamily manifest_family(const ExperimentManifest& manifest);

/// Full semantic validation (family exists, basepoint interior, target in the
/// catalog, ks increasing, ...). Throws ManifestError listing every problem.
void validate_manifest(const ExperimentManifest& manifest);

/// Output directory after applying the environment default.
std::filesystem::path resolve_output_dir(const ExperimentManifest& manifest);

}  // namespace holo
