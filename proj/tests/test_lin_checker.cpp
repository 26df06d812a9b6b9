#include <doctest.h>

#include <random>

#include "atomcheck/lin_checker.hpp"
#include "support/fixtures.hpp"

using namespace atomcheck;
using namespace atomcheck::test;

namespace {

const SequentialSpec& map_spec() {
  return SequentialSpec::for_family(Family::OrderedMap);
}

// The size harness with put(0,0) returned before size() started and before
// put(1,1) started; slots are size()=0, put(0,0)=1, put(1,1)=2.
History size_history(const char* outcome) {
  History hist;
  hist.harness = parse_harness(kSizeHarness);
  hist.outcome = parse_outcome(outcome);
  hist.hb_invocations = induced_invocation_order(hist.harness);
  hist.hb_invocations.emplace(1, 0);  // put(0,0) < size()
  return hist;
}

}  // namespace

TEST_CASE("a history pinning put(0,0) before size() is linearizable at 1") {
  CHECK(is_linearizable(size_history("(1,null,null)"), map_spec()));
}

TEST_CASE("the same history reporting an empty map is not linearizable") {
  CHECK_FALSE(is_linearizable(size_history("(0,null,null)"), map_spec()));
}

TEST_CASE("a sequential replay is its own linearization witness") {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 60; ++i) {
    Harness h = random_map_harness(rng, 6, 1, 2);  // single sequence
    auto idx = indexed_invocations(h);
    History hist;
    hist.harness = h;
    AdtState s = map_spec().new_state();
    for (const auto& item : idx) {
      hist.outcome.values.push_back(map_spec().apply(s, *item.invocation));
    }
    hist.hb_invocations = induced_invocation_order(h);
    CHECK(is_linearizable(hist, map_spec()));
  }
}

TEST_CASE("strengthening happens-before never repairs a history") {
  std::mt19937_64 rng(61);
  int checked = 0;
  while (checked < 150) {
    Harness h = random_map_harness(rng, 5, 3, 2);
    AtomicOutcomeSet set = atomic_outcomes(h, map_spec());
    // Random outcome: sometimes atomic, sometimes mutated.
    Outcome o = *set.outcomes.begin();
    if (rng() % 2 == 0 && !o.values.empty()) {
      size_t slot = rng() % o.values.size();
      o.values[slot] = rng() % 2 ? Value::integer(static_cast<int64_t>(rng() % 3))
                                 : Value::boolean(rng() % 2 == 0);
    }
    History weak = induced_history(h, o);
    History strong = weak;
    int n = h.num_invocations();
    int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a == b) continue;
    strong.hb_invocations.emplace(a, b);
    if (!is_strict_partial_order(n, strong.hb_invocations)) continue;
    ++checked;
    if (is_linearizable(strong, map_spec())) {
      CHECK(is_linearizable(weak, map_spec()));
    }
  }
}

TEST_CASE("weakest-history check coincides with outcome-set membership") {
  Harness h1 = parse_harness(kHarness1);
  CHECK(harness_linearizable_outcome(h1, parse_outcome("null, (), null, true"),
                                     map_spec()));
  CHECK_FALSE(harness_linearizable_outcome(
      h1, parse_outcome("null, (), null, false"), map_spec()));
}

TEST_CASE("agreement with the outcome oracle on random harnesses") {
  std::mt19937_64 rng(67);
  for (int i = 0; i < 100; ++i) {
    Harness h = random_map_harness(rng, 5, 3, 2);
    AtomicOutcomeSet set = atomic_outcomes(h, map_spec());
    for (const Outcome& o : set.outcomes) {
      CHECK(harness_linearizable_outcome(h, o, map_spec()));
    }
    // Mutated outcomes must agree in both directions.
    std::vector<Outcome> members(set.outcomes.begin(), set.outcomes.end());
    for (int m = 0; m < 10; ++m) {
      Outcome o = members[rng() % members.size()];
      size_t slot = rng() % o.values.size();
      switch (rng() % 3) {
        case 0: o.values[slot] = Value::integer(static_cast<int64_t>(rng() % 3)); break;
        case 1: o.values[slot] = Value::null(); break;
        default: o.values[slot] = Value::boolean(rng() % 2 == 0); break;
      }
      CHECK(harness_linearizable_outcome(h, o, map_spec()) == set.contains(o));
    }
  }
}

TEST_CASE("history validation rejects malformed inputs") {
  Harness h1 = parse_harness(kHarness1);
  History hist;
  hist.harness = h1;
  hist.outcome = parse_outcome("null, (), null");  // wrong width
  hist.hb_invocations = induced_invocation_order(h1);
  CHECK_THROWS_AS(is_linearizable(hist, map_spec()), HarnessError);

  History weaker = induced_history(h1, parse_outcome("null, (), null, true"));
  weaker.hb_invocations.clear();  // drops the program order
  CHECK_THROWS_AS(is_linearizable(weaker, map_spec()), HarnessError);
}

TEST_CASE("the exhaustive search is size-guarded") {
  Harness big;
  big.sequences.resize(1);
  for (int i = 0; i < kMaxCheckedInvocations + 1; ++i) {
    big.sequences[0].push_back(Invocation{"size", {}});
  }
  History hist = induced_history(big, Outcome{std::vector<Value>(
                                           kMaxCheckedInvocations + 1,
                                           Value::integer(0))});
  CHECK_THROWS_AS(is_linearizable(hist, map_spec()), HarnessError);
}
