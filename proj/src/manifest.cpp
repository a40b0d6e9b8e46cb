#include "holo/manifest.hpp"

#include "holo/subgroup_order.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace holo {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& errors) {
  std::string out = "invalid manifest:";
  for (const auto& e : errors) out += "\n  - " + e;
  return out;
}

class Reader {
 public:
  std::vector<std::string> errors;

  void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!allowed.count(it.key())) errors.push_back(where + ": unknown key '" + it.key() + "'");
  }

  bool object(const json& parent, const std::string& key, const std::string& where) {
    if (!parent.contains(key)) return false;
    if (!parent.at(key).is_object()) {
      errors.push_back(where + "." + key + ": expected an object");
      return false;
    }
    return true;
  }

  template <class T>
  void number(const json& obj, const std::string& key, const std::string& where, T& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        errors.push_back(where + "." + key + ": expected an integer");
        return;
      }
      out = v.get<T>();
    } else {
      if (!v.is_number()) {
        errors.push_back(where + "." + key + ": expected a number");
        return;
      }
      out = v.get<T>();
    }
  }

  template <class T>
  void number_list(const json& obj, const std::string& key, const std::string& where, std::vector<T>& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      errors.push_back(where + "." + key + ": expected an array");
      return;
    }
    std::vector<T> values;
    for (const json& e : v) {
      if constexpr (std::is_integral_v<T>) {
        if (!e.is_number_integer()) {
          errors.push_back(where + "." + key + ": expected integers");
          return;
        }
      } else if (!e.is_number()) {
        errors.push_back(where + "." + key + ": expected numbers");
        return;
      }
      values.push_back(e.get<T>());
    }
    out = std::move(values);
  }

  void string(const json& obj, const std::string& key, const std::string& where, std::string& out) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_string()) {
      errors.push_back(where + "." + key + ": expected a string");
      return;
    }
    out = obj.at(key).get<std::string>();
  }
};

}  // namespace

ManifestError::ManifestError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

ExperimentManifest parse_manifest(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ManifestError({std::string("not valid JSON: ") + e.what()});
  }
  if (!doc.is_object()) throw ManifestError({"top level must be an object"});

  ExperimentManifest m;
  Reader r;
  r.check_keys(doc, "manifest",
               {"family", "chart", "basepoint", "ks", "loops", "integrator", "estimation", "classification", "outputs"});

  if (!doc.contains("family")) {
    r.errors.push_back("manifest: missing required key 'family'");
  } else if (r.object(doc, "family", "manifest")) {
    const json& fam = doc.at("family");
    r.check_keys(fam, "family", {"name", "params"});
    if (!fam.contains("name")) r.errors.push_back("family: missing 'name'");
    r.string(fam, "name", "family", m.family);
    if (r.object(fam, "params", "family")) {
      for (auto it = fam.at("params").begin(); it != fam.at("params").end(); ++it) {
        if (!it.value().is_number()) {
          r.errors.push_back("family.params." + it.key() + ": expected a number");
          continue;
        }
        m.family_params.values.emplace_back(it.key(), it.value().get<double>());
      }
    }
  }

  if (r.object(doc, "chart", "manifest")) {
    const json& c = doc.at("chart");
    r.check_keys(c, "chart", {"margin", "grid"});
    if (c.contains("margin")) {
      double margin = 0.0;
      r.number(c, "margin", "chart", margin);
      m.chart_margin = margin;
    }
    r.number(c, "grid", "chart", m.grid);
  }

  if (doc.contains("basepoint")) {
    std::vector<double> bp;
    r.number_list(doc, "basepoint", "manifest", bp);
    if (!bp.empty()) m.basepoint = Eigen::Map<const Vector>(bp.data(), static_cast<Eigen::Index>(bp.size()));
  }

  if (!doc.contains("ks")) r.errors.push_back("manifest: missing required key 'ks'");
  r.number_list(doc, "ks", "manifest", m.ks);

  if (r.object(doc, "loops", "manifest")) {
    const json& l = doc.at("loops");
    r.check_keys(l, "loops", {"square_scales", "circle_radii", "random_count", "random_amplitude", "seed"});
    r.number_list(l, "square_scales", "loops", m.square_scales);
    r.number_list(l, "circle_radii", "loops", m.circle_radii);
    r.number(l, "random_count", "loops", m.random_count);
    r.number(l, "random_amplitude", "loops", m.random_amplitude);
    r.number(l, "seed", "loops", m.seed);
  }

  if (r.object(doc, "integrator", "manifest")) {
    const json& i = doc.at("integrator");
    r.check_keys(i, "integrator", {"steps"});
    r.number(i, "steps", "integrator", m.steps);
  }

  if (r.object(doc, "estimation", "manifest")) {
    const json& e = doc.at("estimation");
    r.check_keys(e, "estimation", {"gap_threshold", "closure_passes", "generator_eps"});
    r.number(e, "gap_threshold", "estimation", m.gap_threshold);
    r.number(e, "closure_passes", "estimation", m.closure_passes);
    r.number(e, "generator_eps", "estimation", m.generator_eps);
  }

  if (r.object(doc, "classification", "manifest")) {
    const json& c = doc.at("classification");
    r.check_keys(c, "classification", {"target", "restarts", "tol"});
    r.string(c, "target", "classification", m.target);
    r.number(c, "restarts", "classification", m.restarts);
    r.number(c, "tol", "classification", m.tol);
  }

  if (r.object(doc, "outputs", "manifest")) {
    const json& o = doc.at("outputs");
    r.check_keys(o, "outputs", {"directory"});
    r.string(o, "directory", "outputs", m.output_dir);
  }

  if (!r.errors.empty()) throw ManifestError(r.errors);
  return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError({"cannot open manifest '" + path.string() + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentManifest m = parse_manifest(ss.str());
  validate_manifest(m);
  return m;
}

void apply_overrides(ExperimentManifest& manifest, const ManifestOverrides& overrides) {
  if (overrides.steps) manifest.steps = *overrides.steps;
  if (overrides.seed) manifest.seed = *overrides.seed;
  if (overrides.restarts) manifest.restarts = *overrides.restarts;
  if (overrides.output_dir) manifest.output_dir = *overrides.output_dir;
}

MetricFamily manifest_family(const ExperimentManifest& manifest) {
  MetricFamily fam = builtin_family(manifest.family, manifest.family_params);
  if (manifest.chart_margin) {
    fam.chart.margin = *manifest.chart_margin;
    fam.chart.validate();
  }
  if (manifest.basepoint) fam.basepoint = *manifest.basepoint;
  if (!fam.chart.is_interior(fam.basepoint)) throw std::invalid_argument("basepoint is not inside the chart margin");
  return fam;
}

void validate_manifest(const ExperimentManifest& m) {
  std::vector<std::string> errors;
  if (m.ks.empty()) errors.push_back("ks: must be non-empty");
  for (std::size_t i = 0; i < m.ks.size(); ++i) {
    if (m.ks[i] < 1) errors.push_back("ks: entries must be >= 1");
    if (i > 0 && m.ks[i] <= m.ks[i - 1]) errors.push_back("ks: must be strictly increasing");
  }
  if (m.steps < 16 || m.steps % 2 != 0) errors.push_back("integrator.steps: must be even and >= 16");
  if (m.grid < 2) errors.push_back("chart.grid: must be >= 2");
  if (m.random_count < 0) errors.push_back("loops.random_count: must be >= 0");
  if (!(m.random_amplitude > 0.0)) errors.push_back("loops.random_amplitude: must be positive");
  for (double s : m.square_scales)
    if (!(s > 0.0)) errors.push_back("loops.square_scales: entries must be positive");
  for (double r : m.circle_radii)
    if (!(r > 0.0)) errors.push_back("loops.circle_radii: entries must be positive");
  if (!(m.gap_threshold > 0.0 && m.gap_threshold < 1.0)) errors.push_back("estimation.gap_threshold: must lie in (0, 1)");
  if (m.closure_passes < 0 || m.closure_passes > 3) errors.push_back("estimation.closure_passes: must lie in 0..3");
  if (!(m.generator_eps > 0.0)) errors.push_back("estimation.generator_eps: must be positive");
  if (m.restarts < 1) errors.push_back("classification.restarts: must be >= 1");
  if (!(m.tol > 0.0)) errors.push_back("classification.tol: must be positive");

  // each check runs on its own so that one bad field does not hide another
  std::optional<MetricFamily> fam;
  try {
    fam = builtin_family(m.family, m.family_params);
  } catch (const std::exception& e) {
    errors.push_back(std::string("family: ") + e.what());
  }
  if (fam) {
    try {
      catalog_entry(m.target, fam->limit.dim);
    } catch (const std::invalid_argument& e) {
      errors.push_back(std::string("classification.target: ") + e.what());
    }
    ChartDomain chart = fam->chart;
    if (m.chart_margin) {
      chart.margin = *m.chart_margin;
      try {
        chart.validate();
      } catch (const std::exception& e) {
        errors.push_back(std::string("chart.margin: ") + e.what());
      }
    }
    if (m.basepoint && m.basepoint->size() != chart.dim)
      errors.push_back("basepoint: dimension does not match the family");
    else if (!chart.is_interior(m.basepoint.value_or(fam->basepoint)))
      errors.push_back("basepoint: not inside the chart margin");
  }

  if (!errors.empty()) throw ManifestError(errors);
}

std::filesystem::path resolve_output_dir(const ExperimentManifest& manifest) {
  if (!manifest.output_dir.empty()) return manifest.output_dir;
  if (const char* env = std::getenv("HOLONOMY_OUTPUT_DIR"); env && *env) return env;
  return "holonomy_out";
}

}  // namespace holo
