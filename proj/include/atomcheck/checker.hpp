#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "atomcheck/enumerator.hpp"
#include "atomcheck/executor.hpp"
#include "atomcheck/suts.hpp"

namespace atomcheck {

struct CheckConfig {
  std::string sut;                // registry name; also fixes the family
  std::string method;             // method under test
  std::vector<std::string> core;  // empty = the family's default core set
  std::vector<MethodOverride> method_overrides;

  EnumParams bounds{6, 2, 2};  // schedule caps
  std::chrono::nanoseconds time_per_harness = std::chrono::seconds(1);
  std::optional<uint64_t> trials_per_harness;
  int chunk_size = 100;
  uint64_t seed = 0;
  int workers = 0;
  CoopMode coop = CoopMode::Auto;
  std::optional<std::chrono::nanoseconds> global_timeout;
  EnumOptions enum_options;
};

struct HarnessRecord {
  EnumParams params;
  std::string harness;
  OutcomeHistogram histogram;
};

struct CheckVerdict {
  enum class Kind { NonAtomic, Exhausted, Timeout };
  Kind kind = Kind::Exhausted;
  std::string harness;  // NON-ATOMIC only
  std::string outcome;
  uint64_t frequency = 0;
  uint64_t trials = 0;  // trials on the witnessing harness
};

struct CheckReport {
  // configuration echo
  std::string sut;
  std::string family;
  std::string method;
  std::vector<std::string> core;
  EnumParams bounds;
  uint64_t seed = 0;
  int chunk_size = 0;

  std::vector<HarnessRecord> records;  // every harness actually stressed
  CheckVerdict verdict;
  uint64_t harnesses_generated = 0;
  uint64_t harnesses_tested = 0;
  double total_seconds = 0;
};

/// The whole pipeline for one method: walk the parameter schedule; for
/// each budget construct, shuffle and chunk the harnesses; stress each
/// harness against its precomputed atomic outcome set. Chunks run to
/// completion, and the first chunk containing a violation ends the run
/// with a NON-ATOMIC verdict (re-validated against a freshly computed
/// outcome set before reporting).
CheckReport check(const CheckConfig& cfg);

std::string write_report_json(const CheckReport& report);
CheckReport read_report_json(const std::string& text);
std::string write_report_table(const CheckReport& report);

}  // namespace atomcheck
