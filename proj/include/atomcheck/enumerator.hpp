#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "atomcheck/adt_spec.hpp"
#include "atomcheck/harness.hpp"

namespace atomcheck {

/// One enumeration budget: number of invocations, distinct argument
/// values, and invocation sequences.
struct EnumParams {
  int invocations = 1;
  int values = 1;
  int sequences = 1;

  friend bool operator==(const EnumParams&, const EnumParams&) = default;
  std::string to_string() const;  // "(4,2,2)"
};

/// The diagonal parameter schedule (1,1,1), (2,2,2), ... clamped
/// component-wise at the configured caps, and adjusted so a budget never
/// asks for more sequences than invocations. Complete: any target triple
/// within the caps is eventually dominated by an emitted triple.
class ParamSchedule {
 public:
  explicit ParamSchedule(EnumParams caps);

  bool exhausted() const;
  EnumParams next();

 private:
  EnumParams caps_;
  int step_ = 0;
};

struct EnumOptions {
  bool symmetry_reduction = true;
  bool filter_all_read_only = true;
  bool filter_serialized_read_only = true;
  // The construction constraints require the method set and value set to
  // equal the requested ones exactly; these switches relax them to subset
  // containment.
  bool allow_method_subset = false;
  bool allow_value_subset = false;
  // Enumerate every strict partial order between sequences regardless of
  // the sequence count. By default the full enumeration is used up to 3
  // sequences and the initial/final two-phase shapes beyond that.
  bool full_happens_before = false;
};

/// All strict partial orders between `sequences` indices, each given in
/// transitively reduced form. With full=false and more than 3 sequences,
/// restricted to the shapes with at most one initial and one final
/// sequence.
std::vector<OrderPairs> happens_before_choices(int sequences, bool full);

/// Every instantiation of the method's parameters over the integer domain
/// [0, values-1]; collection and map arguments have cardinality 2.
std::vector<Invocation> method_instantiations(const MethodSpec& m, int values);

/// Streams the set of well-formed harnesses h with
///   methods(h) = core ∪ {m},  one invocation of m,
///   #invocations(h), values(h), #sequences(h) matching the budget,
/// deduplicated up to symmetry and filtered, in a deterministic order.
/// Infeasible budgets produce nothing. Return false to stop.
void for_each_constructed_harness(const std::vector<std::string>& core,
                                  const std::string& method, EnumParams params,
                                  const SequentialSpec& spec,
                                  const EnumOptions& options,
                                  const std::function<bool(const Harness&)>& fn);

std::vector<Harness> construct_harnesses(const std::vector<std::string>& core,
                                         const std::string& method,
                                         EnumParams params,
                                         const SequentialSpec& spec,
                                         const EnumOptions& options = {});

/// Exclusion predicates behind the two enumeration filters.
bool uses_only_read_only(const Harness& h, const SequentialSpec& spec);
/// True when the method under test is read-only and every update
/// invocation is ordered with the method's sequence, i.e. nothing can
/// mutate in parallel with it.
bool read_only_target_fully_serialized(const Harness& h, const std::string& method,
                                       const SequentialSpec& spec);

/// Deterministic Fisher-Yates permutation driven by a seeded
/// std::mt19937_64; identical input and seed give an identical order on
/// every platform.
void shuffle_harnesses(std::vector<Harness>& hs, uint64_t seed);

}  // namespace atomcheck
