#include "holo/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace holo {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::runtime_error("csv: bad number '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::runtime_error("csv: bad boolean '" + s + "'");
}

}  // namespace

std::string render_csv(const SemicontinuityReport& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const MemberRow& row : report.rows) {
    out += std::to_string(row.k) + "," + num(row.c0_conn_dist) + "," + num(row.c1_metric_dist) + "," +
           num(row.max_transport_dist) + "," + row.class_id + "," + num(row.class_residual) + "," +
           yes_no(row.leq_limit_member) + "," + num(row.leq_residual) + "\n";
  }
  // limit row: distances to itself vanish and the order relation is reflexive
  const PipelineResult& lim = report.limit;
  out += "-1," + num(0.0) + "," + num(0.0) + "," + num(0.0) + "," + lim.classification.id + "," +
         num(lim.classification.residual) + "," + yes_no(lim.ok) + "," + num(lim.ok ? 0.0 : lim.classification.residual) +
         "\n";
  return out;
}

std::string render_text(const SemicontinuityReport& report) {
  std::ostringstream out;
  out << "family: " << report.family << "\n";
  out << "target H: " << report.target << "\n";
  out << "loops: " << report.loop_labels.size() << "\n\n";
  const std::string lim_id = report.limit.classification.id;
  for (const MemberRow& row : report.rows) {
    out << "k=" << row.k << ": [Hol(g)] = [" << lim_id << "] " << (row.leq_limit_member ? "≤" : "≰") << " [Hol(g_"
        << row.k << ")] = [" << row.class_id << "]"
        << "  (class residual " << short_num(row.class_residual) << ", order residual " << short_num(row.leq_residual)
        << ", c0 " << short_num(row.c0_conn_dist) << ", transport " << short_num(row.max_transport_dist) << ", "
        << (row.member_in_target ? "⊆ H" : "⊄ H") << ")\n";
  }
  out << "limit: [Hol(g)] = [" << lim_id << "] (residual " << short_num(report.limit.classification.residual) << ", "
      << (report.limit_in_target ? "⊆ H" : "⊄ H") << ")\n\n";
  out << "all members in H: " << yes_no(report.all_members_in_target) << "\n";
  out << "limit in H: " << yes_no(report.limit_in_target) << "\n";
  out << "[Hol(g)] ≤ [Hol(g_k)] for all k: " << yes_no(report.order_holds_all) << "\n";
  out << "strict (limit class strictly smaller): " << yes_no(report.strict) << "\n";
  out << "semicontinuity verdict: " << yes_no(report.verdict) << "\n";
  if (!report.frame_steps.empty()) {
    out << "\nframe steps |F_{k+1} - F_k|:";
    for (double d : report.frame_steps) out << " " << short_num(d);
    out << "\nwitness steps |U_{k+1} - U_k|:";
    for (double d : report.witness_steps) out << " " << short_num(d);
    out << "\nfinal frame gap |F_k - F_limit|: " << short_num(report.final_frame_gap) << "\n";
  }
  if (!report.notes.empty()) {
    out << "\nnotes:\n";
    for (const auto& n : report.notes) out << "  " << n << "\n";
  }
  return out.str();
}

std::vector<std::filesystem::path> render_report(const SemicontinuityReport& report, const std::filesystem::path& dir,
                                                 const std::vector<ReportFormat>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (ReportFormat f : formats) {
    const std::filesystem::path path = dir / (f == ReportFormat::csv ? "report.csv" : "summary.txt");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << (f == ReportFormat::csv ? render_csv(report) : render_text(report));
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::runtime_error("csv: expected 8 fields in '" + line + "'");
    CsvRow r;
    r.k = static_cast<int>(parse_double(f[0]));
    r.c0_conn_dist = parse_double(f[1]);
    r.c1_metric_dist = parse_double(f[2]);
    r.max_transport_dist = parse_double(f[3]);
    r.class_id = f[4];
    r.class_residual = parse_double(f[5]);
    r.leq_limit_member = parse_bool(f[6]);
    r.leq_residual = parse_double(f[7]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace holo
