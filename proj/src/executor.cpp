#include "atomcheck/executor.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "atomcheck/lin_checker.hpp"

namespace atomcheck {

Value Sut::invoke(const Invocation& inv) {
  int id = method_id(inv.method);
  if (id < 0) throw SpecError("object under test does not implement " + inv.method);
  return invoke(id, inv.args);
}

StressBudget StressBudget::for_time(std::chrono::nanoseconds t, int workers) {
  StressBudget b;
  b.time_limit = t;
  b.workers = workers;
  return b;
}

StressBudget StressBudget::for_trials(uint64_t n, int workers) {
  StressBudget b;
  b.trial_limit = n;
  b.workers = workers;
  return b;
}

double OutcomeHistogram::trials_per_second() const {
  double secs = std::chrono::duration<double>(elapsed).count();
  return secs > 0 ? static_cast<double>(total) / secs : 0.0;
}

double OutcomeHistogram::trials_per_second_per_worker() const {
  return workers_used > 0 ? trials_per_second() / workers_used : 0.0;
}

PhasePlan PhasePlan::plan(const Harness& h) {
  PhasePlan p;
  p.phases = topological_layers(h.num_sequences(), h.hb);
  p.phase_of.resize(h.num_sequences());
  for (size_t k = 0; k < p.phases.size(); ++k) {
    for (int s : p.phases[k]) p.phase_of[s] = static_cast<int>(k);
  }
  return p;
}

namespace {

struct Step {
  int method;
  const std::vector<Value>* args;
  int slot;
};

std::vector<std::vector<Step>> compile_steps(const Harness& h, const Sut& sut) {
  std::vector<std::vector<Step>> out(h.num_sequences());
  int slot = 0;
  for (int s = 0; s < h.num_sequences(); ++s) {
    for (const Invocation& inv : h.sequences[s]) {
      int id = sut.method_id(inv.method);
      if (id < 0) {
        throw SpecError("object under test does not implement " + inv.method);
      }
      out[s].push_back({id, &inv.args, slot++});
    }
  }
  return out;
}

Value guarded_invoke(Sut& sut, int method, const std::vector<Value>& args) {
  try {
    return sut.invoke(method, args);
  } catch (...) {
    return Value::exception();
  }
}

inline void cpu_pause() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_ia32_pause();
#else
  std::this_thread::yield();
#endif
}

/// Counting barrier reused across trials: spins briefly, then yields. A
/// participant stuck for longer than the hang timeout makes wait() return
/// false so the trial can be abandoned with a diagnostic instead of a
/// silent deadlock.
class TrialBarrier {
 public:
  /// spin_limit: pause-loop iterations before falling back to yields.
  /// Spinning helps when every worker has its own core and is wasted when
  /// they share one, so the caller picks.
  TrialBarrier(int n, uint32_t spin_limit) : n_(n), spin_limit_(spin_limit) {}

  bool wait() {
    int phase = phase_.load(std::memory_order_acquire);
    if (arrived_.fetch_add(1, std::memory_order_acq_rel) + 1 == n_) {
      arrived_.store(0, std::memory_order_relaxed);
      phase_.store(phase + 1, std::memory_order_release);
      return true;
    }
    uint32_t spins = 0;
    auto deadline = std::chrono::steady_clock::time_point::max();
    while (phase_.load(std::memory_order_acquire) == phase) {
      ++spins;
      if (spins < spin_limit_) {
        cpu_pause();
        continue;
      }
      std::this_thread::yield();
      if ((spins & 0xfffu) == 0) {
        auto now = std::chrono::steady_clock::now();
        if (deadline == std::chrono::steady_clock::time_point::max()) {
          deadline = now + kHangTimeout;
        } else if (now > deadline) {
          return false;
        }
      }
    }
    return true;
  }

 private:
  static constexpr std::chrono::seconds kHangTimeout{10};
  int n_;
  uint32_t spin_limit_;
  std::atomic<int> arrived_{0};
  std::atomic<int> phase_{0};
};

struct GroupControl {
  std::atomic<bool> stop{false};
  std::atomic<bool> aborted{false};
  std::atomic<uint64_t> trials_remaining{0};
  bool use_trial_limit = false;
  bool use_deadline = false;
  std::chrono::steady_clock::time_point deadline;

  uint64_t claim(uint64_t want) {
    uint64_t cur = trials_remaining.load(std::memory_order_relaxed);
    while (true) {
      if (cur == 0) return 0;
      uint64_t take = std::min(want, cur);
      if (trials_remaining.compare_exchange_weak(cur, cur - take,
                                                 std::memory_order_relaxed)) {
        return take;
      }
    }
  }
};

int64_t clock_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

uint64_t worker_rand() {
  thread_local uint64_t x =
      0x2545f4914f6cdd1dULL ^ reinterpret_cast<uintptr_t>(&x);
  x ^= x << 13;
  x ^= x >> 7;
  x ^= x << 17;
  return x;
}

// In cooperative mode a quarter of trials start each worker with a random
// number of yields. Without this, the barrier releaser always gets the
// first invocation in when threads outnumber cores, and schedules where
// the other sequence leads are never exercised.
constexpr uint64_t kStartJitterYields = 8;

struct DistinctHistory {
  Outcome outcome;
  OrderPairs hb;
  uint64_t count = 0;
};

/// One set of persistent workers (one per sequence) plus one instance
/// under test, cycling through trials. Worker 0 is the leader: it claims
/// budget, resets the instance, and records outcomes; the others only run
/// their sequence between barriers.
class TrialGroup {
 public:
  TrialGroup(const Harness& h, const PhasePlan& plan, std::unique_ptr<Sut> sut,
             const AtomicOutcomeSet& atomic_set, GroupControl& ctrl,
             bool cooperative, bool fail_fast, bool record_histories)
      : harness_(h),
        plan_(plan),
        sut_(std::move(sut)),
        atomic_set_(atomic_set),
        ctrl_(ctrl),
        cooperative_(cooperative),
        fail_fast_(fail_fast),
        record_(record_histories),
        barrier_(h.num_sequences(), cooperative ? 4 : 128),
        steps_(compile_steps(h, *sut_)) {
    int n = h.num_invocations();
    outcome_.values.resize(n);
    ts_start_.resize(n);
    ts_end_.resize(n);
  }

  void start() {
    for (int s = 0; s < harness_.num_sequences(); ++s) {
      threads_.emplace_back([this, s] { worker(s); });
    }
  }

  void join() {
    for (auto& t : threads_) {
      if (ctrl_.aborted.load()) {
        t.detach();  // a stuck invocation cannot be joined safely
      } else {
        t.join();
      }
    }
  }

  std::unordered_map<Outcome, OutcomeHistogram::Row, OutcomeHash> histogram;
  std::unordered_map<std::string, DistinctHistory> histories;
  uint64_t trials = 0;
  uint64_t phase_order_violations = 0;

 private:
  // Leader-only. Returns false when no further trial may run.
  bool prepare_next_trial() {
    if (ctrl_.stop.load(std::memory_order_relaxed)) return false;
    if (ctrl_.use_deadline && std::chrono::steady_clock::now() >= ctrl_.deadline) {
      ctrl_.stop.store(true, std::memory_order_relaxed);
      return false;
    }
    if (ctrl_.use_trial_limit) {
      if (claimed_ == 0) claimed_ = ctrl_.claim(16);
      if (claimed_ == 0) return false;
      --claimed_;
    }
    sut_->reset();
    return true;
  }

  // Leader-only, after the final phase barrier of a trial.
  void record_trial() {
    ++trials;
    auto [it, fresh] = histogram.try_emplace(outcome_);
    if (fresh) {
      it->second.outcome = outcome_;
      it->second.atomic = atomic_set_.contains(outcome_);
    }
    ++it->second.count;
    if (!it->second.atomic && fail_fast_) {
      ctrl_.stop.store(true, std::memory_order_relaxed);
    }
    if (record_) record_history();
  }

  void record_history() {
    int n = harness_.num_invocations();
    for (size_t k = 0; k + 1 < plan_.phases.size(); ++k) {
      int64_t max_end = INT64_MIN;
      int64_t min_start = INT64_MAX;
      for (int s : plan_.phases[k]) {
        for (const Step& st : steps_[s]) max_end = std::max(max_end, ts_end_[st.slot]);
      }
      for (int s : plan_.phases[k + 1]) {
        for (const Step& st : steps_[s]) {
          min_start = std::min(min_start, ts_start_[st.slot]);
        }
      }
      if (min_start < max_end) ++phase_order_violations;
    }
    OrderPairs hb;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a != b && ts_end_[a] < ts_start_[b]) hb.emplace(a, b);
      }
    }
    std::ostringstream key;
    key << outcome_.to_string() << '|';
    for (const auto& [a, b] : hb) key << a << '<' << b << ',';
    auto [it, fresh] = histories.try_emplace(key.str());
    if (fresh) {
      it->second.outcome = outcome_;
      it->second.hb = std::move(hb);
    }
    ++it->second.count;
  }

  void worker(int me) {
    bool leader = me == 0;
    for (;;) {
      if (leader && !prepare_next_trial()) stop_flag_ = true;
      if (!barrier_.wait()) {
        abort_group();
        return;
      }
      if (stop_flag_) return;
      if (cooperative_) {
        uint64_t r = worker_rand();
        if ((r & 3) == 0) {
          uint64_t jitter = (r >> 2) % kStartJitterYields;
          for (uint64_t i = 0; i < jitter; ++i) std::this_thread::yield();
        }
      }
      for (size_t k = 0; k < plan_.phases.size(); ++k) {
        if (plan_.phase_of[me] == static_cast<int>(k)) {
          for (const Step& st : steps_[me]) {
            if (record_) ts_start_[st.slot] = clock_ns();
            outcome_.values[st.slot] = guarded_invoke(*sut_, st.method, *st.args);
            if (record_) ts_end_[st.slot] = clock_ns();
            if (cooperative_ && (worker_rand() & 1)) std::this_thread::yield();
          }
        }
        if (!barrier_.wait()) {
          abort_group();
          return;
        }
      }
      if (leader) record_trial();
    }
  }

  void abort_group() {
    ctrl_.aborted.store(true, std::memory_order_relaxed);
    ctrl_.stop.store(true, std::memory_order_relaxed);
  }

  const Harness& harness_;
  const PhasePlan& plan_;
  std::unique_ptr<Sut> sut_;
  const AtomicOutcomeSet& atomic_set_;
  GroupControl& ctrl_;
  bool cooperative_;
  bool fail_fast_;
  bool record_;
  TrialBarrier barrier_;
  std::vector<std::vector<Step>> steps_;
  Outcome outcome_;
  std::vector<int64_t> ts_start_;
  std::vector<int64_t> ts_end_;
  std::vector<std::thread> threads_;
  uint64_t claimed_ = 0;
  bool stop_flag_ = false;  // per group, written by the leader only
};

bool resolve_cooperative(CoopMode mode, int total_threads) {
  switch (mode) {
    case CoopMode::On: return true;
    case CoopMode::Off: return false;
    case CoopMode::Auto: {
      unsigned hw = std::thread::hardware_concurrency();
      if (hw == 0) hw = 1;
      return static_cast<unsigned>(total_threads) > hw;
    }
  }
  return false;
}

struct StressRun {
  OutcomeHistogram histogram;
  StressVerdict verdict;
  std::vector<std::unique_ptr<TrialGroup>> groups;
};

StressRun run_groups(const Harness& h, const SutAdapter& adapter,
                     const SequentialSpec& spec, const StressBudget& budget,
                     bool record_histories) {
  validate_harness(h, spec);
  if (!budget.time_limit && !budget.trial_limit) {
    throw SpecError("stress budget needs a time or trial limit");
  }
  if (!adapter.fresh) throw SpecError("adapter has no factory");

  AtomicOutcomeSet set = atomic_outcomes(h, spec);
  PhasePlan plan = PhasePlan::plan(h);
  int seqs = h.num_sequences();
  int groups_n = budget.workers > 0 ? std::max(1, budget.workers / seqs) : 1;
  bool coop = resolve_cooperative(budget.coop, groups_n * seqs);

  GroupControl ctrl;
  if (budget.trial_limit) {
    ctrl.use_trial_limit = true;
    ctrl.trials_remaining.store(*budget.trial_limit);
  }
  auto started = std::chrono::steady_clock::now();
  if (budget.time_limit) {
    ctrl.use_deadline = true;
    ctrl.deadline = started + *budget.time_limit;
  }

  StressRun run;
  for (int g = 0; g < groups_n; ++g) {
    auto sut = adapter.fresh();
    if (!sut) throw SpecError("adapter factory returned no instance");
    run.groups.push_back(std::make_unique<TrialGroup>(
        h, plan, std::move(sut), set, ctrl, coop, budget.fail_fast,
        record_histories));
  }
  for (auto& g : run.groups) g->start();
  for (auto& g : run.groups) g->join();
  auto elapsed = std::chrono::steady_clock::now() - started;

  std::unordered_map<Outcome, OutcomeHistogram::Row, OutcomeHash> merged;
  for (auto& g : run.groups) {
    run.histogram.total += g->trials;
    for (auto& [o, row] : g->histogram) {
      auto [it, fresh] = merged.try_emplace(o, row);
      if (!fresh) it->second.count += row.count;
    }
  }
  for (auto& [o, row] : merged) run.histogram.rows.push_back(row);
  std::sort(run.histogram.rows.begin(), run.histogram.rows.end(),
            [](const auto& a, const auto& b) { return a.count > b.count; });
  run.histogram.elapsed =
      std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed);
  run.histogram.workers_used = groups_n * seqs;

  if (ctrl.aborted.load()) {
    run.verdict.kind = StressVerdict::Kind::Aborted;
    run.verdict.diagnostic =
        "a worker failed to reach the trial barrier (suspected hang in the "
        "object under test); results below are partial";
    return run;
  }
  for (const auto& row : run.histogram.rows) {
    if (!row.atomic) {
      run.verdict.kind = StressVerdict::Kind::Violation;
      run.verdict.witness = row.outcome;
      run.verdict.count = row.count;
      return run;
    }
  }
  run.verdict.kind = StressVerdict::Kind::AtomicSoFar;
  return run;
}

}  // namespace

Outcome run_trial(const Harness& h, Sut& sut, const PhasePlan& plan) {
  auto steps = compile_steps(h, sut);
  sut.reset();
  Outcome o;
  o.values.resize(h.num_invocations());
#ifndef NDEBUG
  std::vector<unsigned char> written(h.num_invocations(), 0);
#endif
  for (const auto& phase : plan.phases) {
    std::vector<std::thread> threads;
    threads.reserve(phase.size());
    for (int s : phase) {
      threads.emplace_back([&, s] {
        for (const Step& st : steps[s]) {
          o.values[st.slot] = guarded_invoke(sut, st.method, *st.args);
#ifndef NDEBUG
          ++written[st.slot];
#endif
        }
      });
    }
    for (auto& t : threads) t.join();
  }
#ifndef NDEBUG
  for (unsigned char w : written) assert(w == 1 && "outcome slot written once");
#endif
  return o;
}

History record_history_trial(const Harness& h, Sut& sut, const PhasePlan& plan) {
  auto steps = compile_steps(h, sut);
  sut.reset();
  int n = h.num_invocations();
  History hist;
  hist.harness = h;
  hist.outcome.values.resize(n);
  std::vector<int64_t> start_ns(n), end_ns(n);
  for (const auto& phase : plan.phases) {
    std::vector<std::thread> threads;
    threads.reserve(phase.size());
    for (int s : phase) {
      threads.emplace_back([&, s] {
        for (const Step& st : steps[s]) {
          start_ns[st.slot] = clock_ns();
          hist.outcome.values[st.slot] = guarded_invoke(sut, st.method, *st.args);
          end_ns[st.slot] = clock_ns();
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b && end_ns[a] < start_ns[b]) hist.hb_invocations.emplace(a, b);
    }
  }
  return hist;
}

std::pair<OutcomeHistogram, StressVerdict> stress(const Harness& h,
                                                  const SutAdapter& adapter,
                                                  const SequentialSpec& spec,
                                                  const StressBudget& budget) {
  StressRun run = run_groups(h, adapter, spec, budget, false);
  return {std::move(run.histogram), std::move(run.verdict)};
}

ValidationReport validate_histories(const Harness& h, const SutAdapter& adapter,
                                    const SequentialSpec& spec,
                                    const StressBudget& budget) {
  if (h.num_invocations() > kMaxCheckedInvocations) {
    throw HarnessError("harness too large for validation mode");
  }
  StressRun run = run_groups(h, adapter, spec, budget, true);
  AtomicOutcomeSet set = atomic_outcomes(h, spec);

  ValidationReport report;
  report.trials = run.histogram.total;
  std::unordered_map<std::string, DistinctHistory> merged_histories;
  for (auto& g : run.groups) {
    report.phase_order_violations += g->phase_order_violations;
    for (auto& [key, dh] : g->histories) {
      auto [it, fresh] = merged_histories.try_emplace(key, dh);
      if (!fresh) it->second.count += dh.count;
    }
  }
  for (auto& [key, dh] : merged_histories) {
    (void)key;
    History hist;
    hist.harness = h;
    hist.outcome = dh.outcome;
    hist.hb_invocations = dh.hb;
    report.histories.push_back(std::move(hist));
    report.history_counts.push_back(dh.count);
  }
  for (const History& hist : report.histories) {
    bool lin = is_linearizable(hist, spec);
    bool atomic = set.contains(hist.outcome);
    if (lin) ++report.linearizable_histories;
    if (!atomic) ++report.nonatomic_outcome_histories;
    if (lin && !atomic) ++report.counterexamples;
  }
  return report;
}

}  // namespace atomcheck
