#include <doctest.h>

#include <chrono>

#include "atomcheck/checker.hpp"
#include "atomcheck/oracle.hpp"
#include "support/fixtures.hpp"

using namespace atomcheck;
using namespace atomcheck::test;
using namespace std::chrono_literals;

namespace {

CheckConfig putall_config(const char* sut) {
  CheckConfig cfg;
  cfg.sut = sut;
  cfg.method = "putAll";
  cfg.core = {"get", "remove"};
  cfg.bounds = {3, 2, 2};
  cfg.time_per_harness = 250ms;
  cfg.seed = 1;
  return cfg;
}

}  // namespace

TEST_CASE("check finds the seeded putAll bug end to end") {
  CheckReport report = check(putall_config("map-nonatomic-putall"));
  REQUIRE(report.verdict.kind == CheckVerdict::Kind::NonAtomic);
  CHECK(report.verdict.harness.find("putAll") != std::string::npos);
  CHECK(report.verdict.frequency > 0);
  CHECK(report.harnesses_tested > 0);
  CHECK(report.harnesses_tested <= report.harnesses_generated);

  // The reported witness must replay as non-atomic offline.
  Harness witness = parse_harness(report.verdict.harness);
  AtomicOutcomeSet set =
      atomic_outcomes(witness, SequentialSpec::for_family(Family::OrderedMap));
  CHECK_FALSE(set.contains(parse_outcome(report.verdict.outcome)));
}

TEST_CASE("check exhausts its bounds on the locked map") {
  CheckConfig cfg = putall_config("locked-map");
  cfg.time_per_harness = 0ms;
  cfg.trials_per_harness = 400;
  CheckReport report = check(cfg);
  CHECK(report.verdict.kind == CheckVerdict::Kind::Exhausted);
  CHECK(report.harnesses_tested == report.harnesses_generated);
  CHECK(report.records.size() == report.harnesses_tested);
  for (const HarnessRecord& rec : report.records) {
    for (const auto& row : rec.histogram.rows) CHECK(row.atomic);
  }
}

TEST_CASE("identical configurations attempt the identical harness order") {
  CheckConfig cfg = putall_config("locked-map");
  cfg.time_per_harness = 0ms;
  cfg.trials_per_harness = 1;
  CheckReport a = check(cfg);
  CheckReport b = check(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].harness == b.records[i].harness);
  }
  cfg.seed = 2;
  CheckReport c = check(cfg);
  bool same_order = a.records.size() == c.records.size();
  for (size_t i = 0; same_order && i < a.records.size(); ++i) {
    same_order = a.records[i].harness == c.records[i].harness;
  }
  CHECK_FALSE(same_order);
}

TEST_CASE("a global timeout cuts the run short") {
  CheckConfig cfg = putall_config("locked-map");
  cfg.time_per_harness = 100ms;
  cfg.global_timeout = 300ms;
  CheckReport report = check(cfg);
  CHECK(report.verdict.kind == CheckVerdict::Kind::Timeout);
  CHECK(report.harnesses_tested < report.harnesses_generated);
}

TEST_CASE("configuration errors are rejected") {
  CheckConfig cfg = putall_config("no-such-sut");
  CHECK_THROWS_AS(check(cfg), SpecError);
  cfg = putall_config("locked-map");
  cfg.core = {"putAll"};
  CHECK_THROWS_AS(check(cfg), SpecError);
  cfg = putall_config("locked-map");
  cfg.chunk_size = 0;
  CHECK_THROWS_AS(check(cfg), SpecError);
  cfg = putall_config("locked-map");
  cfg.method = "offer";  // queue method on a map
  CHECK_THROWS_AS(check(cfg), SpecError);
}

TEST_CASE("json reports round-trip losslessly") {
  CheckConfig cfg = putall_config("map-nonatomic-putall");
  CheckReport report = check(cfg);
  std::string json = write_report_json(report);
  CheckReport parsed = read_report_json(json);
  CHECK(write_report_json(parsed) == json);
  CHECK(parsed.verdict.harness == report.verdict.harness);
  CHECK(parsed.records.size() == report.records.size());
}

TEST_CASE("the table report carries the violation row") {
  CheckReport report = check(putall_config("map-nonatomic-putall"));
  std::string table = write_report_table(report);
  CHECK(table.find("NON-ATOMIC") != std::string::npos);
  CHECK(table.find("params | tested/total | harness | outcome") !=
        std::string::npos);
  CHECK(table.find(report.verdict.harness) != std::string::npos);
  CHECK(table.find(report.verdict.outcome) != std::string::npos);

  CheckConfig locked = putall_config("locked-map");
  locked.time_per_harness = 0ms;
  locked.trials_per_harness = 50;
  std::string exhausted = write_report_table(check(locked));
  CHECK(exhausted.find("EXHAUSTED") != std::string::npos);
}

TEST_CASE("default core sets come from the family spec") {
  CheckConfig cfg;
  cfg.sut = "locked-map";
  cfg.method = "clear";
  cfg.bounds = {4, 2, 2};  // too small for the default 4-method core + clear
  cfg.time_per_harness = 0ms;
  cfg.trials_per_harness = 1;
  CheckReport report = check(cfg);
  CHECK(report.core ==
        std::vector<std::string>{"put", "get", "remove", "containsKey"});
  CHECK(report.verdict.kind == CheckVerdict::Kind::Exhausted);
  CHECK(report.harnesses_generated == 0);
}

TEST_CASE("method metadata overrides flow into enumeration") {
  // Reclassifying size as an update disables the serialized-read-only
  // filter for it, so ordered shapes reappear.
  CheckConfig cfg;
  cfg.sut = "locked-map";
  cfg.method = "size";
  cfg.core = {"put"};
  cfg.bounds = {2, 1, 2};
  cfg.time_per_harness = 0ms;
  cfg.trials_per_harness = 1;
  CheckReport plain = check(cfg);
  cfg.method_overrides = {{"size", Mutability::Update, std::nullopt}};
  CheckReport reclassified = check(cfg);
  CHECK(reclassified.harnesses_generated > plain.harnesses_generated);
}
