#include "holo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace holo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConjugacyClass class_of(const PipelineResult& p, int l) {
  return {p.classification.id, l, p.estimate.basis};
}

}  // namespace

PipelineSettings pipeline_settings(const ExperimentManifest& manifest, const MetricFamily& family) {
  PipelineSettings s;
  LoopSpec spec;
  spec.square_scales = manifest.square_scales;
  spec.circle_radii = manifest.circle_radii;
  spec.random_count = manifest.random_count;
  spec.random_amplitude = manifest.random_amplitude;
  spec.seed = manifest.seed;
  s.loops = loop_catalog(family.basepoint, spec, family.chart).loops;
  s.steps = manifest.steps;
  s.generator_eps = manifest.generator_eps;
  s.estimate.gap_threshold = manifest.gap_threshold;
  s.estimate.closure_passes = manifest.closure_passes;
  s.search.restarts = manifest.restarts;
  s.search.tol = manifest.tol;
  s.search.seed = manifest.seed;
  s.search.exec = Exec::serial;
  s.catalog = catalog(family.limit.dim);
  s.target = catalog_entry(manifest.target, family.limit.dim);
  return s;
}

PipelineResult run_pipeline(const MetricField& metric, const MetricFamily& family, const PipelineSettings& settings) {
  PipelineResult out;
  out.label = metric.label;
  const int l = metric.dim;
  out.classification.id = "unclassified";
  out.classification.residual = kInf;
  out.classification.witness = Matrix::Identity(l, l);
  out.in_target.residual = kInf;
  out.in_target.witness = Matrix::Identity(l, l);
  try {
    const ChartDomain& chart = family.chart;
    const Point& x = family.basepoint;
    const double step = chart.default_step();
    const ConnectionField conn = levi_civita(metric, chart, step);
    out.compatibility = compatibility_residual(conn, metric, chart, x, step);
    if (!(out.compatibility < settings.compatibility_tol))
      throw NumericError("compatibility residual " + std::to_string(out.compatibility) + " exceeds tolerance");

    out.frame = orthonormal_frame(metric.evaluate(x));
    const std::vector<TransportResult> transports =
        transport_all(conn, settings.loops, settings.steps, chart, Exec::serial);

    HolonomySample sample;
    sample.basepoint = x;
    sample.orthonormal_frame = out.frame;
    const Matrix frame_inv = out.frame.inverse();
    for (std::size_t i = 0; i < transports.size(); ++i) {
      out.transports.push_back(transports[i].matrix);
      out.max_error_estimate = std::max(out.max_error_estimate, transports[i].error_estimate);
      out.max_so_defect = std::max(out.max_so_defect, transports[i].so_defect);
      sample.loops.push_back(settings.loops[i].label);
      sample.framed.push_back(frame_inv * transports[i].matrix * out.frame);
    }
    sample.transports = transports;

    const std::vector<Matrix> generators =
        small_loop_generators(conn, chart, x, out.frame, settings.generator_eps, settings.steps);
    out.estimate = estimate_algebra(sample, generators, settings.estimate);
    out.classification = classify(out.estimate, settings.catalog, settings.search);
    out.in_target = conjugacy_search(out.estimate.basis, settings.target, settings.search);
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.failure = e.what();
  }
  return out;
}

SemicontinuityReport run_semicontinuity(const ExperimentManifest& manifest, Exec exec) {
  validate_manifest(manifest);
  const MetricFamily family = manifest_family(manifest);
  const PipelineSettings settings = pipeline_settings(manifest, family);
  const int l = family.limit.dim;
  const std::size_t nk = manifest.ks.size();

  SemicontinuityReport report;
  report.family = family.name;
  report.target = manifest.target;
  for (const LoopPath& loop : settings.loops) report.loop_labels.push_back(loop.label);

  std::vector<PipelineResult> pipelines(nk + 1);
  parallel_for(nk + 1, exec, [&](std::size_t i) {
    const MetricField metric = i < nk ? family.member(manifest.ks[i]) : family.limit;
    pipelines[i] = run_pipeline(metric, family, settings);
  });
  report.limit = pipelines[nk];
  report.limit_in_target = report.limit.ok && report.limit.in_target.holds;
  if (!report.limit.ok) report.notes.push_back("limit: " + report.limit.failure);

  const double step = family.chart.default_step();
  const ConnectionField limit_conn = levi_civita(family.limit, family.chart, step);
  const ConjugacyClass limit_class = class_of(report.limit, l);

  report.rows.resize(nk);
  parallel_for(nk, exec, [&](std::size_t i) {
    MemberRow& row = report.rows[i];
    row.k = manifest.ks[i];
    row.pipeline = pipelines[i];
    const MetricField member = family.member(row.k);
    const ConnectionField conn = levi_civita(member, family.chart, step);
    row.c0_conn_dist = c0_connection_distance(conn, limit_conn, family.chart, manifest.grid, Exec::serial);
    row.c1_metric_dist = c1_metric_distance(member, family.limit, family.chart, manifest.grid, step, Exec::serial);
    row.class_id = row.pipeline.classification.id;
    row.class_residual = row.pipeline.classification.residual;
    row.member_in_target = row.pipeline.ok && row.pipeline.in_target.holds;

    if (row.pipeline.ok && report.limit.ok) {
      double worst = 0.0;
      for (std::size_t t = 0; t < row.pipeline.transports.size(); ++t)
        worst = std::max(worst, (row.pipeline.transports[t] - report.limit.transports[t]).norm());
      row.max_transport_dist = worst;
      const ConjugacyClass member_class = class_of(row.pipeline, l);
      const OrderVerdict up = leq(limit_class, member_class, settings.search);
      const OrderVerdict down = leq(member_class, limit_class, settings.search);
      row.leq_limit_member = up.holds;
      row.leq_residual = up.residual;
      row.member_leq_limit = down.holds;
    } else {
      row.max_transport_dist = kInf;
      row.leq_residual = kInf;
    }
  });

  report.all_members_in_target = true;
  report.order_holds_all = true;
  report.strict = true;
  for (const MemberRow& row : report.rows) {
    if (!row.pipeline.ok) report.notes.push_back("k=" + std::to_string(row.k) + ": " + row.pipeline.failure);
    report.all_members_in_target = report.all_members_in_target && row.member_in_target;
    report.order_holds_all = report.order_holds_all && row.leq_limit_member;
    report.strict = report.strict && row.leq_limit_member && !row.member_leq_limit;
  }
  report.verdict = report.order_holds_all && (!report.all_members_in_target || report.limit_in_target);

  for (std::size_t i = 0; i + 1 < nk; ++i) {
    const PipelineResult& a = report.rows[i].pipeline;
    const PipelineResult& b = report.rows[i + 1].pipeline;
    if (!a.ok || !b.ok) continue;
    report.frame_steps.push_back((b.frame - a.frame).norm());
    report.witness_steps.push_back((b.classification.witness - a.classification.witness).norm());
  }
  if (nk > 0 && report.rows.back().pipeline.ok && report.limit.ok)
    report.final_frame_gap = (report.rows.back().pipeline.frame - report.limit.frame).norm();
  return report;
}

}  // namespace holo
