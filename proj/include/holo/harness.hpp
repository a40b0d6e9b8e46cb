#pragma once

// Semicontinuity experiments over a metric family: classify the holonomy of
// every member and of the limit, and check [Hol(g)] <= [Hol(g_k)].

#include "holo/holonomy.hpp"
#include "holo/manifest.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace holo {

/// Everything computed for one metric (a member or the limit).
struct PipelineResult {
  std::string label;
  bool ok = false;            ///< false: soft failure, see `failure`
  std::string failure;
  double compatibility = 0.0;
  Matrix frame;
  std::vector<Matrix> transports;  ///< coordinate transports, catalog order
  double max_error_estimate = 0.0;
  double max_so_defect = 0.0;
  AlgebraEstimate estimate;
  Classification classification;
  OrderVerdict in_target;
};

struct MemberRow {
  int k = 0;
  double c0_conn_dist = 0.0;
  double c1_metric_dist = 0.0;
  double max_transport_dist = 0.0;
  std::string class_id;
  double class_residual = 0.0;
  bool leq_limit_member = false;
  double leq_residual = 0.0;
  bool member_in_target = false;
  bool member_leq_limit = false;  ///< reverse order; false means strict
  PipelineResult pipeline;
};

struct SemicontinuityReport {
  std::string family;
  std::string target;
  std::vector<std::string> loop_labels;
  std::vector<MemberRow> rows;
  PipelineResult limit;
  bool limit_in_target = false;

  bool all_members_in_target = false;
  bool order_holds_all = false;
  bool strict = false;  ///< the limit class is strictly below every member class
  bool verdict = false;

  /// |frame_{k_{i+1}} - frame_{k_i}| and |U_{k_{i+1}} - U_{k_i}| along ks.
  std::vector<double> frame_steps;
  std::vector<double> witness_steps;
  double final_frame_gap = 0.0;  ///< |frame_{k_last} - frame_limit|
  std::vector<std::string> notes;
};

struct PipelineSettings {
  std::vector<LoopPath> loops;
  int steps = defaults::steps;
  double generator_eps = defaults::generator_eps;
  EstimateOptions estimate;
  SearchOptions search;
  std::vector<SubgroupSpec> catalog;
  SubgroupSpec target;
  double compatibility_tol = defaults::compatibility_tol;
};

PipelineSettings pipeline_settings(const ExperimentManifest& manifest, const MetricFamily& family);

/// Levi-Civita connection, compatibility check, holonomy sample, algebra
/// estimate and classification for one metric. Never throws on numerical
/// trouble; failures are reported in the result.
PipelineResult run_pipeline(const MetricField& metric, const MetricFamily& family, const PipelineSettings& settings);

SemicontinuityReport run_semicontinuity(const ExperimentManifest& manifest, Exec exec = Exec::parallel);

// ---- rendering ----

inline constexpr const char* kCsvHeader =
    "k,c0_conn_dist,c1_metric_dist,max_transport_dist,class_id,class_residual,leq_limit_member,leq_residual";

std::string render_csv(const SemicontinuityReport& report);
std::string render_text(const SemicontinuityReport& report);

enum class ReportFormat { csv, text };

/// Writes report.csv and/or summary.txt into `dir` (created if needed).
/// Throws std::runtime_error if the directory is not writable.
std::vector<std::filesystem::path> render_report(const SemicontinuityReport& report, const std::filesystem::path& dir,
                                                 const std::vector<ReportFormat>& formats = {ReportFormat::csv,
                                                                                             ReportFormat::text});

/// One parsed CSV data row.
struct CsvRow {
  int k = 0;
  double c0_conn_dist = 0.0;
  double c1_metric_dist = 0.0;
  double max_transport_dist = 0.0;
  std::string class_id;
  double class_residual = 0.0;
  bool leq_limit_member = false;
  double leq_residual = 0.0;
};

/// Parses text produced by render_csv; throws std::runtime_error on a bad header or row.
std::vector<CsvRow> parse_csv(const std::string& text);

}  // namespace holo
