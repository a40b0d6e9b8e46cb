// holonomy_lab: command-line driver for holonomy experiments.
//
// Exit codes: 0 success, 1 semicontinuity verdict violated, 2 usage or
// manifest error.

#include "holo/harness.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kVerdictFailed = 1;
constexpr int kUsage = 2;

holo::ExperimentManifest load(const std::string& path, const holo::ManifestOverrides& overrides) {
  holo::ExperimentManifest m = holo::load_manifest(path);
  holo::apply_overrides(m, overrides);
  holo::validate_manifest(m);
  return m;
}

holo::MetricField select_metric(const holo::MetricFamily& family, const std::string& k) {
  if (k == "limit") return family.limit;
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(k, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != k.size() || value < 1) throw std::invalid_argument("--k must be a positive integer or 'limit'");
  return family.member(value);
}

void print_matrix(const holo::Matrix& m) {
  std::cout << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::cout << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) std::cout << (j ? " " : "") << std::setw(24) << m(i, j);
    std::cout << "\n";
  }
}

int cmd_run(const std::string& path, const holo::ManifestOverrides& overrides) {
  const holo::ExperimentManifest m = load(path, overrides);
  const holo::SemicontinuityReport report = holo::run_semicontinuity(m);
  const auto dir = holo::resolve_output_dir(m);
  const auto files = holo::render_report(report, dir);
  std::cout << holo::render_text(report);
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  return report.verdict ? kOk : kVerdictFailed;
}

int cmd_transport(const std::string& path, const holo::ManifestOverrides& overrides, const std::string& k,
                  const std::string& label) {
  const holo::ExperimentManifest m = load(path, overrides);
  const holo::MetricFamily family = holo::manifest_family(m);
  const holo::PipelineSettings settings = holo::pipeline_settings(m, family);
  const holo::MetricField metric = select_metric(family, k);
  const holo::ConnectionField conn = holo::levi_civita(metric, family.chart, family.chart.default_step());
  for (const holo::LoopPath& loop : settings.loops) {
    if (loop.label != label) continue;
    const holo::TransportResult tr = holo::parallel_transport(conn, loop, m.steps, family.chart);
    std::cout << "metric: " << metric.label << "\nloop: " << loop.label << "\ntransport:\n";
    print_matrix(tr.matrix);
    std::cout << "error_estimate: " << tr.error_estimate << "\nso_defect: " << tr.so_defect
              << "\nsteps_used: " << tr.steps_used << "\n";
    return kOk;
  }
  std::cerr << "unknown loop '" << label << "'; available:";
  for (const holo::LoopPath& loop : settings.loops) std::cerr << " " << loop.label;
  std::cerr << "\n";
  return kUsage;
}

int cmd_classify(const std::string& path, const holo::ManifestOverrides& overrides, const std::string& k) {
  const holo::ExperimentManifest m = load(path, overrides);
  const holo::MetricFamily family = holo::manifest_family(m);
  const holo::PipelineSettings settings = holo::pipeline_settings(m, family);
  const holo::PipelineResult p = holo::run_pipeline(select_metric(family, k), family, settings);
  std::cout << "metric: " << p.label << "\n";
  if (!p.ok) std::cout << "warning: " << p.failure << "\n";
  std::cout << "algebra dim: " << p.estimate.dim << " (spectral gap " << p.estimate.spectral_gap << ")\n";
  std::cout << "class: " << p.classification.id << "\nresidual: " << p.classification.residual << "\nwitness:\n";
  print_matrix(p.classification.witness);
  for (const auto& c : p.classification.candidates)
    std::cout << "candidate " << c.id << ": residual " << c.residual << (c.searched ? "" : " (dimension bound)") << "\n";
  std::cout << "contained in " << m.target << ": " << (p.in_target.holds ? "yes" : "no") << "\n";
  return kOk;
}

int cmd_order(const std::string& a, const std::string& b, int dim, int restarts, std::uint64_t seed) {
  holo::SearchOptions options;
  options.restarts = restarts;
  options.seed = seed;
  const holo::OrderVerdict v = holo::leq(holo::ConjugacyClass::of(holo::catalog_entry(a, dim)),
                                         holo::ConjugacyClass::of(holo::catalog_entry(b, dim)), options);
  std::cout << "[" << a << "] ≤ [" << b << "] in SO(" << dim << "): " << (v.holds ? "holds" : "does not hold")
            << "\nresidual: " << v.residual << "\nwitness:\n";
  print_matrix(v.witness);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical holonomy laboratory"};
  app.require_subcommand(1);

  holo::ManifestOverrides overrides;
  std::string manifest_path;
  std::string k = "limit";
  std::string loop_label;
  std::string spec_a, spec_b;
  int dim = 2;
  int order_restarts = holo::defaults::restarts;
  std::uint64_t order_seed = 0;

  auto add_overrides = [&overrides](CLI::App* sub) {
    sub->add_option_function<int>("--steps", [&overrides](int v) { overrides.steps = v; }, "RK4 steps per segment");
    sub->add_option_function<std::uint64_t>("--seed", [&overrides](std::uint64_t v) { overrides.seed = v; },
                                            "Random seed");
    sub->add_option_function<int>("--restarts", [&overrides](int v) { overrides.restarts = v; },
                                  "Conjugacy search restarts");
  };

  auto* run = app.add_subcommand("run", "Run a semicontinuity experiment");
  run->add_option("manifest", manifest_path, "Manifest file")->required();
  add_overrides(run);
  run->add_option_function<std::string>("--out", [&overrides](const std::string& v) { overrides.output_dir = v; },
                                        "Output directory");

  auto* transport = app.add_subcommand("transport", "Transport along one catalog loop");
  transport->add_option("manifest", manifest_path, "Manifest file")->required();
  transport->add_option("--k", k, "Member index or 'limit'")->required();
  transport->add_option("--loop", loop_label, "Loop label")->required();
  add_overrides(transport);

  auto* classify = app.add_subcommand("classify", "Classify the holonomy of one metric");
  classify->add_option("manifest", manifest_path, "Manifest file")->required();
  classify->add_option("--k", k, "Member index or 'limit'")->required();
  add_overrides(classify);

  auto* order = app.add_subcommand("order", "Compare two catalog subgroups");
  order->add_option("spec_a", spec_a, "Catalog id")->required();
  order->add_option("spec_b", spec_b, "Catalog id")->required();
  order->add_option("--dim", dim, "Ambient dimension l")->required();
  order->add_option("--restarts", order_restarts, "Conjugacy search restarts");
  order->add_option("--seed", order_seed, "Random seed");

  auto* families = app.add_subcommand("families", "List built-in metric families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*families) {
      for (const auto& name : holo::builtin_family_names()) std::cout << name << "\n";
      return kOk;
    }
    if (*run) return cmd_run(manifest_path, overrides);
    if (*transport) return cmd_transport(manifest_path, overrides, k, loop_label);
    if (*classify) return cmd_classify(manifest_path, overrides, k);
    if (*order) return cmd_order(spec_a, spec_b, dim, order_restarts, order_seed);
  } catch (const holo::ManifestError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
