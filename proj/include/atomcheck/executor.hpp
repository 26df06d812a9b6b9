#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atomcheck/adt_spec.hpp"
#include "atomcheck/harness.hpp"
#include "atomcheck/oracle.hpp"

namespace atomcheck {

/// An object under test. One instance is confined to one trial group;
/// invoke must tolerate concurrent calls from that group's workers, and
/// reset must restore the pristine empty state between trials (instance
/// pooling).
class Sut {
 public:
  virtual ~Sut() = default;
  virtual void reset() = 0;
  /// Stable id for the dispatch hot path; -1 if the method is unknown.
  virtual int method_id(std::string_view method) const = 0;
  virtual Value invoke(int method, const std::vector<Value>& args) = 0;

  Value invoke(const Invocation& inv);
};

/// Factory producing independent instances; the executor never shares an
/// instance between trial groups.
struct SutAdapter {
  std::function<std::unique_ptr<Sut>()> fresh;
};

enum class CoopMode {
  Auto,  // yield between invocations when threads outnumber cores
  On,
  Off
};

struct StressBudget {
  std::optional<std::chrono::nanoseconds> time_limit;
  std::optional<uint64_t> trial_limit;
  int workers = 0;  // total worker threads to aim for; 0 = one trial group
  bool fail_fast = false;
  CoopMode coop = CoopMode::Auto;

  static StressBudget for_time(std::chrono::nanoseconds t, int workers = 0);
  static StressBudget for_trials(uint64_t n, int workers = 0);
};

struct OutcomeHistogram {
  struct Row {
    Outcome outcome;
    uint64_t count = 0;
    bool atomic = false;
  };
  std::vector<Row> rows;  // sorted by count, descending
  uint64_t total = 0;
  std::chrono::nanoseconds elapsed{0};
  int workers_used = 0;

  double trials_per_second() const;
  double trials_per_second_per_worker() const;
};

struct StressVerdict {
  enum class Kind { AtomicSoFar, Violation, Aborted };
  Kind kind = Kind::AtomicSoFar;
  Outcome witness;       // violation only
  uint64_t count = 0;    // frequency of the witness
  std::string diagnostic;
};

/// Sequences grouped into barrier-separated phases consistent with the
/// harness happens-before: everything in phase k joins before phase k+1
/// launches.
struct PhasePlan {
  std::vector<std::vector<int>> phases;
  std::vector<int> phase_of;

  static PhasePlan plan(const Harness& h);
};

/// One concurrent execution of the harness against the instance: each
/// sequence of a phase runs in its own thread after a synchronized start,
/// writing return values into listing-order outcome slots. Exceptions
/// fold into the E value. Reference runner; the stress loop uses
/// persistent workers instead.
Outcome run_trial(const Harness& h, Sut& sut, const PhasePlan& plan);

/// As run_trial, additionally timestamping every invocation; the history
/// orders a before b iff a returned before b started.
History record_history_trial(const Harness& h, Sut& sut, const PhasePlan& plan);

/// Stress-tests the harness: precomputes the atomic outcome set once, then
/// repeats concurrent trials until the budget is exhausted (or, under
/// fail_fast, until the first non-atomic outcome), classifying every
/// observed outcome by set membership.
std::pair<OutcomeHistogram, StressVerdict> stress(const Harness& h,
                                                  const SutAdapter& sut,
                                                  const SequentialSpec& spec,
                                                  const StressBudget& budget);

/// Validation mode: stress with per-invocation timestamps, deduplicating
/// recorded histories and checking each distinct one with the
/// linearizability oracle. `counterexamples` counts linearizable histories
/// whose outcome is missing from the atomic set (always 0 unless the
/// outcome oracle itself is broken).
struct ValidationReport {
  uint64_t trials = 0;
  std::vector<History> histories;  // distinct
  std::vector<uint64_t> history_counts;
  uint64_t linearizable_histories = 0;
  uint64_t nonatomic_outcome_histories = 0;
  uint64_t counterexamples = 0;
  uint64_t phase_order_violations = 0;
};
ValidationReport validate_histories(const Harness& h, const SutAdapter& sut,
                                    const SequentialSpec& spec,
                                    const StressBudget& budget);

}  // namespace atomcheck
