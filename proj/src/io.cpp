#include "unifinsler/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace unifinsler {

Json matrix_to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    entries.push_back(std::move(row));
  }
  return Json{{"n", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries")) {
    throw InvalidMatrix("matrix_from_json: expected {n, entries}");
  }
  const Eigen::Index n = j.at("n").get<Eigen::Index>();
  const Json& entries = j.at("entries");
  if (n <= 0 || !entries.is_array() ||
      entries.size() != static_cast<std::size_t>(n)) {
    throw InvalidMatrix("matrix_from_json: entry rows do not match n");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = entries.at(i);
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw InvalidMatrix("matrix_from_json: matrix is not square");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& cell = row.at(k);
      if (!cell.is_array() || cell.size() != 2 || !cell.at(0).is_number() ||
          !cell.at(1).is_number()) {
        throw InvalidMatrix("matrix_from_json: entries must be [re, im]");
      }
      m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  if (!all_finite(m)) {
    throw InvalidMatrix("matrix_from_json: non-finite entries");
  }
  return m;
}

Unitary unitary_from_json(const Json& j, const Tolerances& tols) {
  return Unitary(matrix_from_json(j), tols);
}

SkewHermitian skew_from_json(const Json& j, const Tolerances& tols) {
  return SkewHermitian(matrix_from_json(j), tols);
}

std::string trace_convention_name(TraceConvention conv) {
  return conv == TraceConvention::standard ? "standard" : "normalized";
}

TraceConvention trace_convention_from_name(const std::string& name) {
  if (name == "standard") return TraceConvention::standard;
  if (name == "normalized") return TraceConvention::normalized;
  throw ConfigError("unknown trace convention: " + name);
}

std::string format_double(double v) {
  char buf[64];
  const std::to_chars_result res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw ConfigError("format_double failed");
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::numeric_row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::flush() {
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw ConfigError("CsvWriter: cannot open " + path_);
  out << buffer_;
}

CsvWriter::~CsvWriter() {
  try {
    flush();
  } catch (...) {
    // destructor must not throw; a failed flush surfaces as a missing file
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path);
  out << content;
}

SubspaceSpec subspace_from_json(const Json& j, const Tolerances& tols) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("subspace config: expected {kind, ...}");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "full") {
    return SubspaceSpec::full(j.at("n").get<Eigen::Index>());
  }
  if (kind == "special_unitary") {
    return SubspaceSpec::special_unitary(j.at("n").get<Eigen::Index>());
  }
  if (kind == "orthogonal") {
    const Eigen::Index n = j.at("n").get<Eigen::Index>();
    if (j.contains("basis")) {
      return SubspaceSpec::orthogonal(n, matrix_from_json(j.at("basis")));
    }
    return SubspaceSpec::orthogonal(n);
  }
  if (kind == "grassmannian") {
    const Eigen::Index n = j.at("n").get<Eigen::Index>();
    if (j.contains("m")) {
      return SubspaceSpec::grassmannian_rank(n, j.at("m").get<Eigen::Index>());
    }
    if (j.contains("s")) {
      return SubspaceSpec::grassmannian_trace(n, j.at("s").get<double>());
    }
    throw ConfigError("grassmannian config: expected m or s");
  }
  if (kind == "ball_intersection") {
    std::vector<BallSpec> balls;
    for (const Json& b : j.at("balls")) {
      balls.push_back(BallSpec::dinf(unitary_from_json(b.at("center"), tols),
                                     b.at("radius").get<double>()));
    }
    return SubspaceSpec::ball_intersection(std::move(balls));
  }
  if (kind == "fixed_point_set") {
    PairAction action;
    for (const Json& m : j.at("left")) {
      action.left.push_back(unitary_from_json(m, tols));
    }
    for (const Json& m : j.at("right")) {
      action.right.push_back(unitary_from_json(m, tols));
    }
    return SubspaceSpec::fixed_point_set(std::move(action));
  }
  if (kind == "subgroup" || kind == "convex_hull") {
    throw ConfigError("subspace config: kind '" + kind +
                      "' needs caller-supplied data and is API-only");
  }
  throw ConfigError("subspace config: unknown kind '" + kind + "'");
}

FiniteGroupAction action_from_json(const Json& j, const Tolerances& tols) {
  std::vector<std::string> labels;
  for (const Json& l : j.at("labels")) labels.push_back(l.get<std::string>());
  std::vector<std::vector<int>> table;
  for (const Json& row : j.at("table")) {
    table.push_back(row.get<std::vector<int>>());
  }
  std::vector<Unitary> phi;
  for (const Json& m : j.at("phi")) phi.push_back(unitary_from_json(m, tols));
  std::vector<Unitary> rho;
  if (j.contains("rho")) {
    for (const Json& m : j.at("rho")) {
      rho.push_back(unitary_from_json(m, tols));
    }
  } else {
    rho = phi;
  }
  FiniteGroupAction action = FiniteGroupAction::two_sided(
      std::move(labels), std::move(table), std::move(phi), std::move(rho));
  action.validate();
  return action;
}

CenterProblem center_problem_from_json(const Json& j, const Tolerances& tols) {
  CenterProblem problem{
      {}, subspace_from_json(j.at("subspace"), tols),
      j.at("radius").get<double>(),
      j.contains("conv")
          ? trace_convention_from_name(j.at("conv").get<std::string>())
          : TraceConvention::standard,
      Unitary::identity(1),
      {}};
  for (const Json& m : j.at("sites")) {
    problem.sites.push_back(unitary_from_json(m, tols));
  }
  if (problem.sites.empty()) throw ConfigError("center config: no sites");
  if (j.contains("start")) {
    problem.start = unitary_from_json(j.at("start"), tols);
  } else {
    problem.start =
        circumradius_witness(problem.sites, problem.subspace, 200, tols)
            .witness;
  }
  if (j.contains("options")) {
    const Json& o = j.at("options");
    if (o.contains("max_iters")) {
      problem.options.max_iters = o.at("max_iters").get<int>();
    }
    if (o.contains("stop_tol")) {
      problem.options.stop_tol = o.at("stop_tol").get<double>();
    }
    if (o.contains("record_trace")) {
      problem.options.record_trace = o.at("record_trace").get<bool>();
    }
  }
  return problem;
}

Json center_result_to_json(const CenterResult& result) {
  Json margins = Json::array();
  for (double m : result.certificates.ball_margins) margins.push_back(m);
  return Json{
      {"center", matrix_to_json(result.center.mat())},
      {"value", result.value},
      {"iterations", result.iterations},
      {"max_move_last", result.max_move_last},
      {"stalled", result.stalled},
      {"certificates",
       Json{{"ball_margins", std::move(margins)},
            {"member_residual", result.certificates.member_residual},
            {"f_lower", result.certificates.f_lower},
            {"lambda", result.certificates.lambda},
            {"gap_bound_d2", result.certificates.gap_bound_d2}}}};
}

Json scan_report_to_json(const ConvexityScanReport& report) {
  return Json{{"context", report.context},
              {"floor", report.floor},
              {"h", report.h},
              {"scan_tol", report.scan_tol},
              {"chord_tol", report.chord_tol},
              {"min_second_difference", report.min_second_difference},
              {"chord_min_slack", report.chord_min_slack},
              {"hypothesis_ok", report.hypothesis_ok},
              {"forced", report.forced},
              {"strict_interior", report.strict_interior},
              {"pass", report.pass}};
}

void write_scan_csv(const std::string& path,
                    const ConvexityScanReport& report) {
  CsvWriter csv(path);
  csv.row({"t", "f", "d2f"});
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    std::vector<std::string> cells{format_double(report.grid[i]),
                                   format_double(report.values[i])};
    if (i >= 1 && i + 1 < report.grid.size()) {
      cells.push_back(format_double(report.second_differences[i - 1]));
    } else {
      cells.push_back("");
    }
    csv.row(cells);
  }
}

void write_flow_csv(const std::string& path,
                    const std::vector<SpectralFlowSample>& samples) {
  CsvWriter csv(path);
  csv.row({"t", "theta_min", "theta_max", "branch_ok"});
  for (const SpectralFlowSample& s : samples) {
    csv.row({format_double(s.t), format_double(s.theta_min),
             format_double(s.theta_max), s.branch_ok ? "1" : "0"});
  }
}

void write_center_trace_csv(const std::string& path,
                            const CenterResult& result) {
  CsvWriter csv(path);
  csv.row({"iter", "f_A", "step"});
  for (const IterationRecord& rec : result.trace) {
    csv.row({std::to_string(rec.iter), format_double(rec.f_value),
             format_double(rec.step)});
  }
}

}  // namespace unifinsler
