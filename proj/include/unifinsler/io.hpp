#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "unifinsler/center.hpp"
#include "unifinsler/convexity.hpp"
#include "unifinsler/rigidity.hpp"

namespace unifinsler {

using Json = nlohmann::json;

// Matrix wire format: {"n": int, "entries": [[[re, im], ...], ...]},
// row-major. Readers reject non-square shapes and non-finite values.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Unitary unitary_from_json(const Json& j,
                          const Tolerances& tols = Tolerances::global());
SkewHermitian skew_from_json(const Json& j,
                             const Tolerances& tols = Tolerances::global());

std::string trace_convention_name(TraceConvention conv);
TraceConvention trace_convention_from_name(const std::string& name);

// Locale-independent float formatting with 17 significant digits.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void row(const std::vector<std::string>& cells);
  void numeric_row(const std::vector<double>& values);

  ~CsvWriter();

 private:
  std::string path_;
  std::string buffer_;
  void flush();
};

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Subspace configs: {"kind": ..., "n": ..., kind-specific payload}.
// subgroup oracles and convex hulls are API-only and rejected here.
SubspaceSpec subspace_from_json(const Json& j,
                                const Tolerances& tols = Tolerances::global());

FiniteGroupAction action_from_json(const Json& j,
                                   const Tolerances& tols = Tolerances::global());

CenterProblem center_problem_from_json(
    const Json& j, const Tolerances& tols = Tolerances::global());

Json center_result_to_json(const CenterResult& result);
Json scan_report_to_json(const ConvexityScanReport& report);

void write_scan_csv(const std::string& path,
                    const ConvexityScanReport& report);
void write_flow_csv(const std::string& path,
                    const std::vector<SpectralFlowSample>& samples);
void write_center_trace_csv(const std::string& path,
                            const CenterResult& result);

}  // namespace unifinsler
