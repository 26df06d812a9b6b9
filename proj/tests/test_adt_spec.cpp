#include <doctest.h>

#include <random>

#include "atomcheck/adt_spec.hpp"
#include "atomcheck/enumerator.hpp"
#include "support/fixtures.hpp"

using namespace atomcheck;
using namespace atomcheck::test;

namespace {

std::vector<Invocation> invocation_pool(const SequentialSpec& spec, int values) {
  std::vector<Invocation> pool;
  for (const MethodSpec& m : spec.methods()) {
    for (Invocation& inv : method_instantiations(m, values)) {
      pool.push_back(std::move(inv));
    }
  }
  return pool;
}

Invocation call(const char* text) {
  Harness h = parse_harness(std::string("[") + text + "]");
  return h.sequences[0][0];
}

}  // namespace

TEST_CASE("map: clear/put/containsKey sequence from the running example") {
  const SequentialSpec& spec = SequentialSpec::for_family(Family::OrderedMap);
  AdtState s = spec.new_state();
  CHECK(spec.apply(s, call("put(0,0)")) == Value::null());
  CHECK(spec.apply(s, call("clear()")) == Value::unit());
  CHECK(spec.apply(s, call("put(1,1)")) == Value::null());
  CHECK(spec.apply(s, call("containsKey(1)")) == Value::boolean(true));
}

TEST_CASE("map: putAll then get then remove") {
  const SequentialSpec& spec = SequentialSpec::for_family(Family::OrderedMap);
  AdtState s = spec.new_state();
  CHECK(spec.apply(s, call("putAll({0=1,1=0})")) == Value::unit());
  CHECK(spec.apply(s, call("get(0)")) == Value::integer(1));
  CHECK(spec.apply(s, call("remove(1)")) == Value::integer(0));
  CHECK(spec.apply(s, call("isEmpty()")) == Value::boolean(false));
  CHECK(spec.apply(s, call("size()")) == Value::integer(1));
  CHECK(spec.apply(s, call("containsValue(1)")) == Value::boolean(true));
  CHECK(spec.apply(s, call("containsValue(0)")) == Value::boolean(false));
}

TEST_CASE("queue: FIFO offer/poll/peek") {
  const SequentialSpec& spec = SequentialSpec::for_family(Family::FifoQueue);
  AdtState s = spec.new_state();
  CHECK(spec.apply(s, call("offer(1)")) == Value::boolean(true));
  CHECK(spec.apply(s, call("poll()")) == Value::integer(1));
  CHECK(spec.apply(s, call("poll()")) == Value::null());
  CHECK(spec.apply(s, call("peek()")) == Value::null());
  spec.apply(s, call("offer(0)"));
  spec.apply(s, call("offer(1)"));
  spec.apply(s, call("offer(0)"));
  CHECK(spec.apply(s, call("toArray()")) ==
        Value::list({Value::integer(0), Value::integer(1), Value::integer(0)}));
  CHECK(spec.apply(s, call("contains(1)")) == Value::boolean(true));
  CHECK(spec.apply(s, call("containsAll({0,1})")) == Value::boolean(true));
  CHECK(spec.apply(s, call("removeAll({0,0})")) == Value::boolean(true));
  CHECK(spec.apply(s, call("toArray()")) == Value::list({Value::integer(1)}));
  CHECK(spec.apply(s, call("removeAll({0,0})")) == Value::boolean(false));
  CHECK(spec.apply(s, call("addAll({1,0})")) == Value::boolean(true));
  CHECK(spec.apply(s, call("toArray()")) ==
        Value::list({Value::integer(1), Value::integer(1), Value::integer(0)}));
}

TEST_CASE("deque: first/last variants, FIFO base semantics") {
  const SequentialSpec& spec = SequentialSpec::for_family(Family::Deque);
  AdtState s = spec.new_state();
  CHECK(spec.apply(s, call("offerFirst(0)")) == Value::boolean(true));
  CHECK(spec.apply(s, call("offer(1)")) == Value::boolean(true));  // at the tail
  CHECK(spec.apply(s, call("peekFirst()")) == Value::integer(0));
  CHECK(spec.apply(s, call("peekLast()")) == Value::integer(1));
  CHECK(spec.apply(s, call("pollLast()")) == Value::integer(1));
  CHECK(spec.apply(s, call("poll()")) == Value::integer(0));  // from the head
  CHECK(spec.apply(s, call("pollFirst()")) == Value::null());
  CHECK(spec.apply(s, call("pollLast()")) == Value::null());
}

TEST_CASE("set: add/remove/contains and the range views") {
  const SequentialSpec& spec = SequentialSpec::for_family(Family::OrderedSet);
  AdtState s = spec.new_state();
  CHECK(spec.apply(s, call("add(2)")) == Value::boolean(true));
  CHECK(spec.apply(s, call("add(0)")) == Value::boolean(true));
  CHECK(spec.apply(s, call("add(2)")) == Value::boolean(false));
  CHECK(spec.apply(s, call("add(1)")) == Value::boolean(true));
  CHECK(spec.apply(s, call("contains(1)")) == Value::boolean(true));
  // Strict upper bound, inclusive lower bound.
  CHECK(spec.apply(s, call("headSet(2)")) ==
        Value::list({Value::integer(0), Value::integer(1)}));
  CHECK(spec.apply(s, call("subSet(1,2)")) == Value::list({Value::integer(1)}));
  CHECK(spec.apply(s, call("subSet(0,3)")) ==
        Value::list({Value::integer(0), Value::integer(1), Value::integer(2)}));
  CHECK(spec.apply(s, call("remove(1)")) == Value::boolean(true));
  CHECK(spec.apply(s, call("remove(1)")) == Value::boolean(false));
  CHECK(spec.apply(s, call("size()")) == Value::integer(2));
}

TEST_CASE("classify: metadata for the map methods") {
  const SequentialSpec& spec = SequentialSpec::for_family(Family::OrderedMap);
  CHECK(spec.classify("get") == std::pair{Mutability::ReadOnly, true});
  CHECK(spec.classify("clear") == std::pair{Mutability::Update, false});
  CHECK(spec.classify("put") == std::pair{Mutability::Update, true});
  CHECK_THROWS_AS(spec.classify("nope"), SpecError);
}

TEST_CASE("classify: overrides") {
  SequentialSpec spec = SequentialSpec::with_overrides(
      Family::OrderedMap,
      {{"clear", std::nullopt, true}, {"get", Mutability::Update, std::nullopt}});
  CHECK(spec.classify("clear") == std::pair{Mutability::Update, true});
  CHECK(spec.classify("get") == std::pair{Mutability::Update, true});
  CHECK_THROWS_AS(
      SequentialSpec::with_overrides(Family::OrderedMap, {{"bogus", {}, {}}}),
      SpecError);
}

TEST_CASE("apply rejects arity and kind mismatches") {
  const SequentialSpec& spec = SequentialSpec::for_family(Family::OrderedMap);
  AdtState s = spec.new_state();
  CHECK_THROWS_AS(spec.apply(s, call("put(1)")), SpecError);
  CHECK_THROWS_AS(spec.apply(s, call("get({0,1})")), SpecError);
  CHECK_THROWS_AS(spec.apply(s, call("putAll(3)")), SpecError);
  CHECK_THROWS_AS(spec.apply(s, Invocation{"bogus", {}}), SpecError);
}

TEST_CASE("determinism: identical replays yield identical returns") {
  std::mt19937_64 rng(23);
  for (Family f : {Family::OrderedMap, Family::FifoQueue, Family::Deque,
                   Family::OrderedSet}) {
    const SequentialSpec& spec = SequentialSpec::for_family(f);
    auto pool = invocation_pool(spec, 3);
    for (int t = 0; t < 50; ++t) {
      std::vector<Invocation> seq;
      int len = 1 + static_cast<int>(rng() % 20);
      for (int i = 0; i < len; ++i) seq.push_back(pool[rng() % pool.size()]);
      CHECK(replay_sequence(seq, spec) == replay_sequence(seq, spec));
    }
  }
}

TEST_CASE("read-only methods leave the state unchanged") {
  std::mt19937_64 rng(29);
  for (Family f : {Family::OrderedMap, Family::FifoQueue, Family::Deque,
                   Family::OrderedSet}) {
    const SequentialSpec& spec = SequentialSpec::for_family(f);
    auto pool = invocation_pool(spec, 3);
    for (int t = 0; t < 60; ++t) {
      // Reach a random state, then fire every read-only instantiation.
      AdtState s = spec.new_state();
      int len = static_cast<int>(rng() % 15);
      for (int i = 0; i < len; ++i) spec.apply(s, pool[rng() % pool.size()]);
      for (const MethodSpec& m : spec.methods()) {
        if (m.mutability != Mutability::ReadOnly) continue;
        for (const Invocation& inv : method_instantiations(m, 3)) {
          AdtState before = s;
          spec.apply(s, inv);
          CHECK(s == before);
        }
      }
    }
  }
}

TEST_CASE("size and isEmpty stay consistent") {
  std::mt19937_64 rng(31);
  for (Family f : {Family::OrderedMap, Family::FifoQueue, Family::OrderedSet}) {
    const SequentialSpec& spec = SequentialSpec::for_family(f);
    auto pool = invocation_pool(spec, 2);
    for (int t = 0; t < 40; ++t) {
      AdtState s = spec.new_state();
      int len = static_cast<int>(rng() % 12);
      for (int i = 0; i < len; ++i) spec.apply(s, pool[rng() % pool.size()]);
      AdtState probe = s;
      bool empty = spec.apply(probe, call("isEmpty()")).as_bool();
      int64_t size = spec.apply(probe, call("size()")).as_int();
      CHECK(empty == (size == 0));
    }
  }
}

TEST_CASE("map algebra: get after put returns the put value") {
  std::mt19937_64 rng(37);
  const SequentialSpec& spec = SequentialSpec::for_family(Family::OrderedMap);
  auto pool = invocation_pool(spec, 2);
  for (int t = 0; t < 80; ++t) {
    AdtState s = spec.new_state();
    int len = static_cast<int>(rng() % 10);
    for (int i = 0; i < len; ++i) spec.apply(s, pool[rng() % pool.size()]);
    int64_t k = static_cast<int64_t>(rng() % 2);
    int64_t v = static_cast<int64_t>(rng() % 2);
    spec.apply(s, Invocation{"put", {Value::integer(k), Value::integer(v)}});
    CHECK(spec.apply(s, Invocation{"get", {Value::integer(k)}}) ==
          Value::integer(v));
  }
}

TEST_CASE("harness validation against the family spec") {
  const SequentialSpec& map = SequentialSpec::for_family(Family::OrderedMap);
  validate_harness(parse_harness(kHarness4), map);
  CHECK_THROWS_AS(validate_harness(parse_harness("[offer(1)]"), map), SpecError);
  CHECK_THROWS_AS(validate_harness(parse_harness("[put(1)]"), map), SpecError);
}
