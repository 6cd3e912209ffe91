#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jnr/crange.hpp"
#include "jnr/decide.hpp"
#include "jnr/family.hpp"
#include "jnr/structure.hpp"
#include "jnr/types.hpp"

namespace jnr {

inline constexpr const char* kToolName = "jnr";
inline constexpr const char* kToolVersion = "0.1.0";

/// One problem: a named matrix tuple, a weight, optional block sizes.
struct ProblemFile {
  int n = 0;
  std::vector<std::string> names;
  MatrixTuple tuple;
  std::optional<int> weight_k;
  std::optional<RVector> weight_c;
  std::vector<int> block_sizes;

  bool has_weight() const { return weight_k.has_value() || weight_c.has_value(); }
  WeightSpec weight() const;
};

ProblemFile parse_problem(const std::string& json_text);
std::string serialize_problem(const ProblemFile& p);

/// Built-in demo problems: ex3.1, ex3.2, ex5.2.  Throws UnknownDemo with the
/// valid names otherwise.
ProblemFile demo_problem(const std::string& name);
std::vector<std::string> demo_names();

/// Report payloads rendered as deterministic JSON text.
struct RunParams {
  int dirs = 720;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::optional<int> k;
  std::string mode;
  double cone_sv = 0.05;
};

std::string support_report_json(const ProblemFile& p, const MatrixTuple& herm,
                                const WeightSpec& C, const std::vector<SupportProbe>& probes,
                                const RunParams& rp);
std::string support_report_csv(const std::vector<SupportProbe>& probes, const RunParams& rp);

std::string boundary_report_csv(const Boundary2D& b,
                                const std::vector<Eigen::Vector2d>& hull,
                                const RunParams& rp);
std::string boundary_report_json(const Boundary2D& b,
                                 const std::vector<Eigen::Vector2d>& hull,
                                 const RunParams& rp);

std::string analysis_report_json(const AnalysisReport& rep, const RunParams& rp);
std::string analysis_report_csv(const AnalysisReport& rep, const RunParams& rp);
std::string pinch_report_json(const PinchDecomposition& pd, const std::vector<int>& splits,
                              double residual, const RunParams& rp);

/// Writes text to path through a temporary file and rename.
void write_atomic(const std::string& path, const std::string& text);

}  // namespace jnr
