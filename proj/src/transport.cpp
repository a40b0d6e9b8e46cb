#include "holo/transport.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace holo {

namespace {

constexpr double kClosureTol = 1e-12;
constexpr int kValidationSamples = 64;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

Point sample_point(const LoopPath& loop, std::size_t seg, double t) { return loop.segments[seg].position(t); }

bool image_inside(const LoopPath& loop, const ChartDomain& chart) {
  for (std::size_t s = 0; s < loop.segments.size(); ++s)
    for (int q = 0; q <= kValidationSamples; ++q)
      if (!chart.is_interior(sample_point(loop, s, static_cast<double>(q) / kValidationSamples))) return false;
  return true;
}

// Generator of the transport ODE, s' = G(t) s.
Matrix ode_generator(const ConnectionField& conn, const CurveSegment& seg, double t, const ChartDomain& chart) {
  const Point p = seg.position(t);
  if (!chart.is_interior(p)) throw DomainError("parallel_transport: loop leaves the chart interior");
  const Point v = seg.velocity(t);
  const std::vector<Matrix> a = conn.coefficients(p);
  Matrix g = Matrix::Zero(conn.fibre_dim, conn.fibre_dim);
  for (int i = 0; i < conn.base_dim; ++i) g.noalias() -= v(i) * a[i];
  if (!g.allFinite()) throw NumericError("parallel_transport: non-finite connection coefficients");
  return g;
}

// Uniform double in [-1, 1) from the raw 64-bit engine output; independent of
// the standard library's distribution implementations.
double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

LoopPath fourier_loop(const Point& x, const std::vector<Vector>& cos_coeffs, const std::vector<Vector>& sin_coeffs,
                      double scale, const std::string& label) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  CurveSegment seg;
  seg.position = [x, cos_coeffs, sin_coeffs, scale](double t) {
    Point p = x;
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m) {
      const double w = two_pi * static_cast<double>(m + 1);
      p += scale * (cos_coeffs[m] * (std::cos(w * t) - 1.0) + sin_coeffs[m] * std::sin(w * t));
    }
    return p;
  };
  seg.velocity = [x, cos_coeffs, sin_coeffs, scale](double t) {
    Point v = Point::Zero(x.size());
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m) {
      const double w = two_pi * static_cast<double>(m + 1);
      v += scale * w * (-cos_coeffs[m] * std::sin(w * t) + sin_coeffs[m] * std::cos(w * t));
    }
    return v;
  };
  LoopPath loop;
  loop.segments = {seg};
  loop.basepoint = x;
  loop.label = label;
  return loop;
}

}  // namespace

// ---- LoopPath ----

Point LoopPath::start() const { return segments.front().position(0.0); }
Point LoopPath::end() const { return segments.back().position(1.0); }

void LoopPath::validate(const ChartDomain& chart) const {
  if (segments.empty()) throw std::invalid_argument("loop '" + label + "' has no segments");
  if ((start() - basepoint).norm() > kClosureTol || (end() - basepoint).norm() > kClosureTol)
    throw std::invalid_argument("loop '" + label + "' does not start and end at its basepoint");
  for (std::size_t s = 0; s + 1 < segments.size(); ++s)
    if ((segments[s].position(1.0) - segments[s + 1].position(0.0)).norm() > kClosureTol)
      throw std::invalid_argument("loop '" + label + "' has disconnected segments");
  if (!image_inside(*this, chart)) throw DomainError("loop '" + label + "' leaves the chart interior");
}

// ---- builders ----

CurveSegment line_segment(const Point& from, const Point& to) {
  CurveSegment seg;
  seg.position = [from, to](double t) -> Point { return from + t * (to - from); };
  seg.velocity = [from, to](double) -> Point { return to - from; };
  return seg;
}

LoopPath square_loop(const Point& x, int i, int j, double side) {
  const Eigen::Index n = x.size();
  Point ei = Point::Zero(n), ej = Point::Zero(n);
  ei(i) = side;
  ej(j) = side;
  const Point c1 = x + ei;
  const Point c2 = c1 + ej;
  const Point c3 = x + ej;
  LoopPath loop;
  loop.segments = {line_segment(x, c1), line_segment(c1, c2), line_segment(c2, c3), line_segment(c3, x)};
  loop.basepoint = x;
  loop.label = "square_" + std::to_string(i) + std::to_string(j) + "_eps" + fmt_double(side);
  return loop;
}

LoopPath circle_loop(const Point& center, double radius, int i, int j) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  CurveSegment seg;
  seg.position = [center, radius, i, j](double t) {
    Point p = center;
    // cos/sin of exactly 0 and 2*pi rounded to close the loop
    const double c = (t == 0.0 || t == 1.0) ? 1.0 : std::cos(two_pi * t);
    const double s = (t == 0.0 || t == 1.0) ? 0.0 : std::sin(two_pi * t);
    p(i) += radius * c;
    p(j) += radius * s;
    return p;
  };
  seg.velocity = [center, radius, i, j](double t) {
    Point v = Point::Zero(center.size());
    v(i) = -two_pi * radius * std::sin(two_pi * t);
    v(j) = two_pi * radius * std::cos(two_pi * t);
    return v;
  };
  LoopPath loop;
  loop.segments = {seg};
  loop.basepoint = seg.position(0.0);
  loop.label = "circle_" + std::to_string(i) + std::to_string(j) + "_r" + fmt_double(radius);
  return loop;
}

LoopPath reversed(const LoopPath& loop) {
  LoopPath out;
  out.basepoint = loop.basepoint;
  out.label = loop.label + "_reversed";
  for (auto it = loop.segments.rbegin(); it != loop.segments.rend(); ++it) {
    const CurveSegment seg = *it;
    CurveSegment r;
    r.position = [seg](double t) { return seg.position(1.0 - t); };
    r.velocity = [seg](double t) -> Point { return -seg.velocity(1.0 - t); };
    out.segments.push_back(r);
  }
  return out;
}

LoopPath concatenate(const LoopPath& c, const LoopPath& d) {
  if ((c.basepoint - d.basepoint).norm() > kClosureTol)
    throw std::invalid_argument("concatenate: loops have different basepoints");
  LoopPath out;
  out.basepoint = c.basepoint;
  out.label = c.label + "+" + d.label;
  out.segments = c.segments;
  out.segments.insert(out.segments.end(), d.segments.begin(), d.segments.end());
  return out;
}

double bump_profile(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t - std::sin(2.0 * std::numbers::pi * t) / (2.0 * std::numbers::pi);
}

double bump_profile_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 1.0 - std::cos(2.0 * std::numbers::pi * t);
}

LoopPath reparametrize_smooth(const LoopPath& loop) {
  LoopPath out;
  out.basepoint = loop.basepoint;
  out.label = loop.label;
  for (const CurveSegment& seg : loop.segments) {
    CurveSegment r;
    r.position = [seg](double t) { return seg.position(bump_profile(t)); };
    r.velocity = [seg](double t) -> Point { return bump_profile_derivative(t) * seg.velocity(bump_profile(t)); };
    out.segments.push_back(r);
  }
  return out;
}

// ---- transport ----

Matrix transport_matrix(const ConnectionField& conn, const LoopPath& loop, int steps, const ChartDomain& chart) {
  if (steps < 1) throw std::invalid_argument("transport_matrix: steps must be positive");
  const int l = conn.fibre_dim;
  Matrix s = Matrix::Identity(l, l);
  const double h = 1.0 / steps;
  for (const CurveSegment& seg : loop.segments) {
    Matrix g0 = ode_generator(conn, seg, 0.0, chart);
    for (int n = 0; n < steps; ++n) {
      const double t = n * h;
      const Matrix gm = ode_generator(conn, seg, t + 0.5 * h, chart);
      const Matrix g1 = ode_generator(conn, seg, (n + 1 == steps) ? 1.0 : t + h, chart);
      const Matrix k1 = g0 * s;
      const Matrix k2 = gm * (s + 0.5 * h * k1);
      const Matrix k3 = gm * (s + 0.5 * h * k2);
      const Matrix k4 = g1 * (s + h * k3);
      s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      g0 = g1;
    }
  }
  if (!s.allFinite()) throw NumericError("parallel_transport: non-finite transport matrix");
  return s;
}

TransportResult parallel_transport(const ConnectionField& conn, const LoopPath& loop, int steps,
                                   const ChartDomain& chart) {
  if (steps < 16 || steps % 2 != 0) throw std::invalid_argument("parallel_transport: steps must be even and >= 16");
  loop.validate(chart);
  TransportResult result;
  result.matrix = transport_matrix(conn, loop, steps, chart);
  const Matrix coarse = transport_matrix(conn, loop, steps / 2, chart);
  result.error_estimate = (result.matrix - coarse).norm() / 15.0;
  const Matrix m = conn.metric ? conn.metric->evaluate(loop.basepoint)
                               : Matrix::Identity(conn.fibre_dim, conn.fibre_dim);
  result.so_defect = so_residual(result.matrix, m);
  result.steps_used = steps * static_cast<int>(loop.segments.size());
  return result;
}

std::vector<TransportResult> transport_all(const ConnectionField& conn, const std::vector<LoopPath>& loops,
                                           int steps, const ChartDomain& chart, Exec exec) {
  std::vector<TransportResult> out(loops.size());
  parallel_for(loops.size(), exec, [&](std::size_t i) { out[i] = parallel_transport(conn, loops[i], steps, chart); });
  return out;
}

// ---- catalog ----

LoopCatalog loop_catalog(const Point& x, const LoopSpec& spec, const ChartDomain& chart) {
  if (!chart.is_interior(x)) throw DomainError("loop_catalog: basepoint is not in the chart interior");
  LoopCatalog cat;
  const int n = chart.dim;

  for (double eps : spec.square_scales)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        LoopPath sq = square_loop(x, i, j, eps);
        if (image_inside(sq, chart))
          cat.loops.push_back(std::move(sq));
        else
          cat.notes.push_back("rejected " + sq.label + ": leaves the chart interior");
      }

  for (double rho : spec.circle_radii)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Point center = x;
        center(i) -= rho;
        LoopPath c = circle_loop(center, rho, i, j);
        c.basepoint = x;
        if (image_inside(c, chart))
          cat.loops.push_back(std::move(c));
        else
          cat.notes.push_back("rejected " + c.label + ": leaves the chart interior");
      }

  std::mt19937_64 rng(spec.seed);
  for (int r = 0; r < spec.random_count; ++r) {
    std::vector<Vector> cs(spec.random_modes, Vector(n)), ss(spec.random_modes, Vector(n));
    for (int m = 0; m < spec.random_modes; ++m) {
      const double bound = spec.random_amplitude / (m + 1);
      for (int i = 0; i < n; ++i) cs[m](i) = bound * uniform_pm1(rng);
      for (int i = 0; i < n; ++i) ss[m](i) = bound * uniform_pm1(rng);
    }
    const std::string label = "random_" + std::to_string(r);
    double scale = 1.0;
    bool placed = false;
    for (int attempt = 0; attempt < 8; ++attempt, scale *= 0.5) {
      LoopPath loop = fourier_loop(x, cs, ss, scale, label);
      if (image_inside(loop, chart)) {
        if (attempt > 0) cat.notes.push_back("shrunk " + label + " by factor " + fmt_double(scale));
        cat.loops.push_back(std::move(loop));
        placed = true;
        break;
      }
    }
    if (!placed) cat.notes.push_back("rejected " + label + ": leaves the chart interior after shrinking");
  }
  return cat;
}

// ---- convergence ----

ConvergenceTable transport_convergence_table(const MetricFamily& family, const LoopPath& loop,
                                             const std::vector<int>& ks, int steps, int grid, Exec exec) {
  const double step = family.chart.default_step();
  const ConnectionField limit_conn = levi_civita(family.limit, family.chart, step);
  const TransportResult limit = parallel_transport(limit_conn, loop, steps, family.chart);

  ConvergenceTable table;
  table.rows.resize(ks.size());
  parallel_for(ks.size(), exec, [&](std::size_t idx) {
    const ConnectionField conn = levi_civita(family.member(ks[idx]), family.chart, step);
    const TransportResult tr = parallel_transport(conn, loop, steps, family.chart);
    ConvergenceRow& row = table.rows[idx];
    row.k = ks[idx];
    row.transport_distance = (tr.matrix - limit.matrix).norm();
    row.connection_distance = c0_connection_distance(conn, limit_conn, family.chart, grid, Exec::serial);
    row.error_estimate = tr.error_estimate + limit.error_estimate;
  });

  double num = 0.0, den = 0.0, bound = 0.0;
  for (const auto& row : table.rows) {
    num += row.transport_distance * row.connection_distance;
    den += row.connection_distance * row.connection_distance;
    if (row.connection_distance > 0.0) bound = std::max(bound, row.transport_distance / row.connection_distance);
  }
  table.regression_constant = den > 0.0 ? num / den : 0.0;
  table.bound_constant = bound;
  return table;
}

double rotation_angle(const Matrix& p) { return std::atan2(p(1, 0), p(0, 0)); }

}  // namespace holo
