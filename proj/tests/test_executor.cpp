#include <doctest.h>

#include <chrono>

#include "atomcheck/executor.hpp"
#include "atomcheck/lin_checker.hpp"
#include "atomcheck/suts.hpp"
#include "support/fixtures.hpp"

using namespace atomcheck;
using namespace atomcheck::test;
using namespace std::chrono_literals;

namespace {

const SequentialSpec& map_spec() {
  return SequentialSpec::for_family(Family::OrderedMap);
}

const SutInfo& sut(const char* name) {
  const SutInfo* info = SutRegistry::builtin().find(name);
  REQUIRE(info != nullptr);
  return *info;
}

}  // namespace

TEST_CASE("phase plans follow the happens-before layers") {
  PhasePlan flat = PhasePlan::plan(parse_harness(kHarness1));
  CHECK(flat.phases == std::vector<std::vector<int>>{{0, 1}});

  PhasePlan staged = PhasePlan::plan(parse_harness(kHarness4));
  CHECK(staged.phases == std::vector<std::vector<int>>{{0, 1}, {2}});

  Harness chain = parse_harness("[a()], [b()], [c()], {0 < 1, 1 < 2}");
  CHECK(PhasePlan::plan(chain).phases ==
        std::vector<std::vector<int>>{{0}, {1}, {2}});
}

TEST_CASE("a trial on the locked map fills the slots like the result array") {
  Harness h1 = parse_harness(kHarness1);
  auto instance = sut("locked-map").make();
  PhasePlan plan = PhasePlan::plan(h1);
  // The clear harness has a single atomic outcome; the locked map can
  // produce nothing else, whatever the interleaving.
  for (int i = 0; i < 200; ++i) {
    Outcome o = run_trial(h1, *instance, plan);
    CHECK(o.to_string() == "null, (), null, true");
  }
}

TEST_CASE("a single-sequence trial equals the sequential replay") {
  Harness h = parse_harness("[put(0,1); get(0); clear(); isEmpty(); remove(0)]");
  auto instance = sut("locked-map").make();
  Outcome trial = run_trial(h, *instance, PhasePlan::plan(h));
  CHECK(trial.values == replay_sequence(h.sequences[0], map_spec()));
}

TEST_CASE("a fully serialized harness can only produce atomic outcomes") {
  Harness h = parse_harness(kSizeHarness);
  h.hb = {{0, 1}};
  AtomicOutcomeSet set = atomic_outcomes(h, map_spec());
  auto instance = sut("locked-map").make();
  PhasePlan plan = PhasePlan::plan(h);
  for (int i = 0; i < 100; ++i) {
    CHECK(set.contains(run_trial(h, *instance, plan)));
  }
}

TEST_CASE("stress honors a trial budget of one") {
  auto [histogram, verdict] =
      stress(parse_harness(kHarness1), sut("locked-map").adapter(), map_spec(),
             StressBudget::for_trials(1));
  CHECK(histogram.total == 1);
  CHECK(verdict.kind == StressVerdict::Kind::AtomicSoFar);
}

TEST_CASE("stress requires a budget") {
  StressBudget empty;
  CHECK_THROWS_AS(stress(parse_harness(kHarness1), sut("locked-map").adapter(),
                         map_spec(), empty),
                  SpecError);
}

TEST_CASE("histogram counts add up to the trial total") {
  auto [histogram, verdict] =
      stress(parse_harness(kSizeHarness), sut("locked-map").adapter(),
             map_spec(), StressBudget::for_trials(20000));
  CHECK(verdict.kind == StressVerdict::Kind::AtomicSoFar);
  CHECK(histogram.total == 20000);
  uint64_t sum = 0;
  for (const auto& row : histogram.rows) {
    sum += row.count;
    CHECK(row.atomic);
  }
  CHECK(sum == histogram.total);
}

TEST_CASE("stress on the locked map never leaves the atomic set") {
  Harness h1 = parse_harness(kHarness1);
  auto [histogram, verdict] = stress(h1, sut("locked-map").adapter(), map_spec(),
                                     StressBudget::for_trials(50000));
  CHECK(verdict.kind == StressVerdict::Kind::AtomicSoFar);
  REQUIRE(histogram.rows.size() == 1);
  CHECK(histogram.rows[0].outcome.to_string() == "null, (), null, true");
}

TEST_CASE("fail-fast stops the run at the first violation") {
  auto budget = StressBudget::for_trials(2'000'000);
  budget.fail_fast = true;
  auto [histogram, verdict] =
      stress(parse_harness(kPutAllHarness), sut("map-nonatomic-putall").adapter(),
             map_spec(), budget);
  REQUIRE(verdict.kind == StressVerdict::Kind::Violation);
  CHECK(verdict.witness.to_string() == "(), 1, null");
  CHECK(histogram.total < 2'000'000);
}

TEST_CASE("recorded histories contain the program order") {
  Harness h1 = parse_harness(kHarness1);
  auto instance = sut("locked-map").make();
  PhasePlan plan = PhasePlan::plan(h1);
  OrderPairs program = induced_invocation_order(h1);
  for (int i = 0; i < 50; ++i) {
    History hist = record_history_trial(h1, *instance, plan);
    OrderPairs closure = transitive_closure(4, hist.hb_invocations);
    for (const auto& pair : program) CHECK(closure.count(pair) == 1);
  }
}

TEST_CASE("a fully serialized plan records a total order") {
  Harness h = parse_harness("[put(0,0)], [get(0)], {0 < 1}");
  auto instance = sut("locked-map").make();
  History hist = record_history_trial(h, *instance, PhasePlan::plan(h));
  CHECK(hist.hb_invocations == OrderPairs{{0, 1}});
  check_history(hist);
}

TEST_CASE("validation mode: locked-map histories are all linearizable") {
  for (const char* text : {kHarness1, kPutAllHarness}) {
    ValidationReport report =
        validate_histories(parse_harness(text), sut("locked-map").adapter(),
                           map_spec(), StressBudget::for_trials(20000));
    CHECK(report.trials == 20000);
    CHECK(report.linearizable_histories == report.histories.size());
    CHECK(report.counterexamples == 0);
    CHECK(report.nonatomic_outcome_histories == 0);
    CHECK(report.phase_order_violations == 0);
  }
}

TEST_CASE("stress throughput is reported") {
  auto [histogram, verdict] =
      stress(parse_harness(kHarness1), sut("locked-map").adapter(), map_spec(),
             StressBudget::for_time(200ms));
  CHECK(verdict.kind == StressVerdict::Kind::AtomicSoFar);
  CHECK(histogram.total > 0);
  CHECK(histogram.workers_used == 2);
  CHECK(histogram.trials_per_second() > 0);
  MESSAGE("trials/s: ", histogram.trials_per_second(), " per worker: ",
          histogram.trials_per_second_per_worker());
}
