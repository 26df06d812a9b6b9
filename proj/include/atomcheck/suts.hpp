#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "atomcheck/adt_spec.hpp"
#include "atomcheck/executor.hpp"

namespace atomcheck {

struct SutInfo {
  std::string name;
  Family family;
  bool expected_atomic = false;
  std::string description;
  std::function<std::unique_ptr<Sut>()> make;

  SutAdapter adapter() const { return {make}; }
};

/// Built-in objects under test: one coarse-locked reference per family
/// (atomic by construction: every method runs inside one object-wide
/// critical section) and one seeded-bug variant per violation category.
/// The seeded bugs release the object lock between the sub-steps of a
/// single method, so their misbehavior is a scheduling race, never a data
/// race; each carries a scheduling-window constant that keeps the race
/// reachable within ordinary stress budgets.
class SutRegistry {
 public:
  static const SutRegistry& builtin();

  const SutInfo* find(std::string_view name) const;
  const std::vector<SutInfo>& all() const { return entries_; }

 private:
  SutRegistry();
  std::vector<SutInfo> entries_;
};

struct ConformanceResult {
  bool conformant = true;
  // On divergence: a minimal invocation sequence on which the object and
  // the sequential spec disagree, with both return vectors.
  std::vector<Invocation> witness;
  std::vector<Value> sut_returns;
  std::vector<Value> spec_returns;
};

/// Replays random single-threaded invocation sequences on a fresh instance
/// and on the sequential spec, comparing every return value.
ConformanceResult sequential_conformance(const SutAdapter& adapter,
                                         const SequentialSpec& spec, int trials,
                                         uint64_t seed);

}  // namespace atomcheck
