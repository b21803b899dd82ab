#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarrep/model_io.hpp"

namespace polarrep {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchemaVersion = "1";

/// Pipeline stages; a verb selects a subset.
struct StageSet {
  bool classes = true;
  bool roots = true;
  bool cayley = true;
  bool extremal = true;
  bool restricted_polar = true;
  bool isoparametric = true;
  bool closures = false;

  static StageSet for_verb(const std::string& verb);
};

struct AnalysisOptions {
  std::uint64_t seed = 0;
  TolerancePolicy pol;
  StageSet stages;
  std::string verb = "analyze";
  int budget = 200;        ///< regular-point samples for class enumeration
  int iso_samples = 10;    ///< transported points per isoparametric verdict
  int probe_samples = 5;
  bool checks_only = false;
};

struct CheckEntry {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool passed() const;
};

struct AnalysisResult {
  json report;
  std::vector<CheckEntry> checks;
  std::vector<std::string> stage_errors;
  bool incomplete = false;
  bool all_checks_passed() const;
};

/// Runs the selected stages. Stage failures are recorded in the report under
/// "stage_errors" and set "incomplete"; they never throw.
AnalysisResult run_analysis(const LoadedModel& model, const AnalysisOptions& opt);

/// Invariant residuals of the pair and representation only.
std::vector<CheckEntry> model_checks(const LoadedModel& model, std::uint64_t seed);

/// Deterministic serialization: sorted keys, two-space indent, trailing newline.
std::string dump_report(const json& report);

}  // namespace polarrep
