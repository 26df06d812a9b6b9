#include "atomcheck/suts.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <thread>

#include "atomcheck/enumerator.hpp"

namespace atomcheck {

namespace {

// Scheduling windows (in yields) used by the seeded bugs. Wide enough
// that whole core-method invocations from other threads fit inside.
constexpr int kClearSnapshotWindow = 24;
constexpr int kClearStepWindow = 4;
constexpr int kSizeShardWindow = 24;
constexpr int kPutAllStepWindow = 24;
constexpr int kContainsAllStepWindow = 24;
constexpr int kPollLastWindow = 24;

uint64_t thread_rand() {
  thread_local uint64_t x =
      0x9e3779b97f4a7c15ULL ^ reinterpret_cast<uintptr_t>(&x);
  x ^= x << 13;
  x ^= x >> 7;
  x ^= x << 17;
  return x;
}

void race_window(int max_yields) {
  int n = static_cast<int>(thread_rand() % static_cast<uint64_t>(max_yields + 1));
  for (int i = 0; i < n; ++i) std::this_thread::yield();
}

/// Base for built-in objects: method ids are the family spec's method
/// indices, and non-buggy methods run the sequential semantics inside one
/// critical section (making them individually atomic).
class SpecBackedSut : public Sut {
 public:
  explicit SpecBackedSut(Family family) : spec_(SequentialSpec::for_family(family)) {}

  void reset() override {
    std::lock_guard<std::mutex> lock(mu_);
    state_ = AdtState{};
  }

  int method_id(std::string_view method) const override {
    return spec_.method_index(method);
  }

  Value invoke(int method, const std::vector<Value>& args) override {
    std::lock_guard<std::mutex> lock(mu_);
    return spec_.apply_indexed(state_, method, args);
  }

 protected:
  Value apply_locked(int method, const std::vector<Value>& args) {
    std::lock_guard<std::mutex> lock(mu_);
    return spec_.apply_indexed(state_, method, args);
  }

  const SequentialSpec& spec_;
  std::mutex mu_;
  AdtState state_;
};

/// Every method under the object-wide lock; the reference-atomic SUT.
class LockedSut final : public SpecBackedSut {
 public:
  using SpecBackedSut::SpecBackedSut;
};

/// clear() snapshots the entries, then deletes them one at a time outside
/// any enclosing critical section, skipping entries whose value changed
/// since the snapshot. A put that rewrites a snapshotted key inside the
/// window survives the clear.
class SnapshotClearMap final : public SpecBackedSut {
 public:
  SnapshotClearMap() : SpecBackedSut(Family::OrderedMap) {
    clear_id_ = spec_.method_index("clear");
  }

  Value invoke(int method, const std::vector<Value>& args) override {
    if (method != clear_id_) return apply_locked(method, args);
    std::vector<std::pair<int64_t, int64_t>> snapshot;
    {
      std::lock_guard<std::mutex> lock(mu_);
      snapshot.assign(state_.map.begin(), state_.map.end());
    }
    race_window(kClearSnapshotWindow);
    for (const auto& [k, v] : snapshot) {
      {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = state_.map.find(k);
        if (it != state_.map.end() && it->second == v) state_.map.erase(it);
      }
      race_window(kClearStepWindow);
    }
    return Value::unit();
  }

 private:
  int clear_id_ = -1;
};

/// size() and isEmpty() sum the two key-parity buckets in two separate
/// critical sections with a window in between, so the two counts can come
/// from different states.
class ShardedCountMap final : public SpecBackedSut {
 public:
  ShardedCountMap() : SpecBackedSut(Family::OrderedMap) {
    size_id_ = spec_.method_index("size");
    is_empty_id_ = spec_.method_index("isEmpty");
  }

  Value invoke(int method, const std::vector<Value>& args) override {
    if (method != size_id_ && method != is_empty_id_) {
      return apply_locked(method, args);
    }
    race_window(kSizeShardWindow);
    int64_t total = shard_count(0);
    race_window(kSizeShardWindow);
    total += shard_count(1);
    if (method == size_id_) return Value::integer(total);
    return Value::boolean(total == 0);
  }

 private:
  int64_t shard_count(int parity) {
    std::lock_guard<std::mutex> lock(mu_);
    int64_t n = 0;
    for (const auto& [k, v] : state_.map) {
      if (((k & 1) == parity)) ++n;
    }
    return n;
  }

  int size_id_ = -1;
  int is_empty_id_ = -1;
};

/// putAll() degenerates to a loop of independent puts with windows between
/// them, exposing the half-applied argument map.
class StepwisePutAllMap final : public SpecBackedSut {
 public:
  StepwisePutAllMap() : SpecBackedSut(Family::OrderedMap) {
    put_all_id_ = spec_.method_index("putAll");
  }

  Value invoke(int method, const std::vector<Value>& args) override {
    if (method != put_all_id_) return apply_locked(method, args);
    for (const auto& [k, v] : args[0].as_map()) {
      {
        std::lock_guard<std::mutex> lock(mu_);
        state_.map[k.as_int()] = v.as_int();
      }
      race_window(kPutAllStepWindow);
    }
    return Value::unit();
  }

 private:
  int put_all_id_ = -1;
};

/// containsAll() checks the argument elements one at a time, each in its
/// own critical section, so the answer can combine reads of different
/// states.
class StepwiseContainsAllQueue final : public SpecBackedSut {
 public:
  StepwiseContainsAllQueue() : SpecBackedSut(Family::FifoQueue) {
    contains_all_id_ = spec_.method_index("containsAll");
  }

  Value invoke(int method, const std::vector<Value>& args) override {
    if (method != contains_all_id_) return apply_locked(method, args);
    for (const Value& e : args[0].as_list()) {
      bool found;
      {
        std::lock_guard<std::mutex> lock(mu_);
        found = std::find(state_.items.begin(), state_.items.end(), e.as_int()) !=
                state_.items.end();
      }
      if (!found) return Value::boolean(false);
      race_window(kContainsAllStepWindow);
    }
    return Value::boolean(true);
  }

 private:
  int contains_all_id_ = -1;
};

/// pollLast() reads the tail in one critical section and removes the
/// current tail in a later one, returning the stale read; an offer in the
/// window makes it discard one element while reporting another.
class StaleTailDeque final : public SpecBackedSut {
 public:
  StaleTailDeque() : SpecBackedSut(Family::Deque) {
    poll_last_id_ = spec_.method_index("pollLast");
  }

  Value invoke(int method, const std::vector<Value>& args) override {
    if (method != poll_last_id_) return apply_locked(method, args);
    race_window(kPollLastWindow);
    int64_t stale;
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (state_.items.empty()) return Value::null();
      stale = state_.items.back();
    }
    race_window(kPollLastWindow);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (!state_.items.empty()) state_.items.pop_back();
    }
    return Value::integer(stale);
  }

 private:
  int poll_last_id_ = -1;
};

template <typename T>
std::function<std::unique_ptr<Sut>()> factory() {
  return [] { return std::make_unique<T>(); };
}

std::function<std::unique_ptr<Sut>()> locked_factory(Family f) {
  return [f] { return std::make_unique<LockedSut>(f); };
}

}  // namespace

SutRegistry::SutRegistry() {
  entries_ = {
      {"locked-map", Family::OrderedMap, true,
       "ordered map, every method under one lock", locked_factory(Family::OrderedMap)},
      {"locked-queue", Family::FifoQueue, true,
       "FIFO queue, every method under one lock", locked_factory(Family::FifoQueue)},
      {"locked-deque", Family::Deque, true,
       "deque, every method under one lock", locked_factory(Family::Deque)},
      {"locked-set", Family::OrderedSet, true,
       "ordered set, every method under one lock", locked_factory(Family::OrderedSet)},
      {"map-nonatomic-clear", Family::OrderedMap, false,
       "clear deletes snapshotted entries one-by-one, skipping rewritten values",
       factory<SnapshotClearMap>()},
      {"map-nonatomic-size", Family::OrderedMap, false,
       "size/isEmpty sum per-parity buckets without a global lock",
       factory<ShardedCountMap>()},
      {"map-nonatomic-putall", Family::OrderedMap, false,
       "putAll runs as a loop of independent puts", factory<StepwisePutAllMap>()},
      {"queue-nonatomic-containsall", Family::FifoQueue, false,
       "containsAll checks elements one-by-one", factory<StepwiseContainsAllQueue>()},
      {"deque-nonatomic-pollLast", Family::Deque, false,
       "pollLast removes the current tail but returns a stale tail read",
       factory<StaleTailDeque>()},
  };
}

const SutRegistry& SutRegistry::builtin() {
  static SutRegistry registry;
  return registry;
}

const SutInfo* SutRegistry::find(std::string_view name) const {
  for (const SutInfo& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

namespace {

std::vector<Invocation> random_sequence(
    const std::vector<std::vector<Invocation>>& pools, std::mt19937_64& rng,
    int max_len) {
  int len = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_len));
  std::vector<Invocation> seq;
  seq.reserve(len);
  for (int i = 0; i < len; ++i) {
    const auto& pool = pools[rng() % pools.size()];
    seq.push_back(pool[rng() % pool.size()]);
  }
  return seq;
}

bool diverges(const std::vector<Invocation>& seq, const SutAdapter& adapter,
              const SequentialSpec& spec, std::vector<Value>* sut_out,
              std::vector<Value>* spec_out) {
  auto sut = adapter.fresh();
  sut->reset();
  AdtState state = spec.new_state();
  bool diff = false;
  std::vector<Value> sut_returns, spec_returns;
  for (const Invocation& inv : seq) {
    Value a;
    try {
      a = sut->invoke(inv);
    } catch (...) {
      a = Value::exception();
    }
    Value b = spec.apply(state, inv);
    sut_returns.push_back(a);
    spec_returns.push_back(b);
    if (a != b) {
      diff = true;
      break;
    }
  }
  if (sut_out) *sut_out = std::move(sut_returns);
  if (spec_out) *spec_out = std::move(spec_returns);
  return diff;
}

}  // namespace

ConformanceResult sequential_conformance(const SutAdapter& adapter,
                                         const SequentialSpec& spec, int trials,
                                         uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Invocation>> pools;
  for (const MethodSpec& m : spec.methods()) {
    pools.push_back(method_instantiations(m, 3));
  }
  ConformanceResult result;
  for (int t = 0; t < trials; ++t) {
    std::vector<Invocation> seq = random_sequence(pools, rng, 20);
    if (!diverges(seq, adapter, spec, nullptr, nullptr)) continue;

    // Shrink to a minimal diverging sequence.
    bool shrunk = true;
    while (shrunk) {
      shrunk = false;
      for (size_t i = 0; i < seq.size(); ++i) {
        std::vector<Invocation> candidate = seq;
        candidate.erase(candidate.begin() + static_cast<long>(i));
        if (!candidate.empty() && diverges(candidate, adapter, spec, nullptr, nullptr)) {
          seq = std::move(candidate);
          shrunk = true;
          break;
        }
      }
    }
    result.conformant = false;
    diverges(seq, adapter, spec, &result.sut_returns, &result.spec_returns);
    result.witness = std::move(seq);
    return result;
  }
  return result;
}

}  // namespace atomcheck
