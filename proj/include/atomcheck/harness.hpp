#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomcheck/outcome.hpp"
#include "atomcheck/poset.hpp"
#include "atomcheck/value.hpp"

namespace atomcheck {

/// A method name with concrete argument values.
struct Invocation {
  std::string method;
  std::vector<Value> args;

  friend bool operator==(const Invocation& a, const Invocation& b) {
    return a.method == b.method && a.args == b.args;
  }
  std::string to_string() const;  // e.g. put(0,0) or putAll({0=1,1=0})
};

/// A test harness: a non-empty list of non-empty invocation sequences plus
/// happens-before constraints between sequence indices. Each sequence runs
/// in its own thread; a constraint i < j means every invocation of sequence
/// i completes before sequence j starts.
///
/// Text form: `[put(0,0)], [clear(); put(1,1); containsKey(1)], {0 < 1}`
/// with the happens-before block optional.
struct Harness {
  std::vector<std::vector<Invocation>> sequences;
  OrderPairs hb;  // sequence-level, kept as written

  int num_sequences() const { return static_cast<int>(sequences.size()); }
  int num_invocations() const;

  friend bool operator==(const Harness& a, const Harness& b) {
    return a.sequences == b.sequences && a.hb == b.hb;
  }
};

/// The notation functions over one harness, bundled.
struct HarnessStats {
  std::set<std::string> methods;
  std::set<Value> values;  // distinct integer arguments, flattened through
                           // collection arguments
  int num_sequences = 0;
  int num_invocations = 0;
  std::map<std::string, std::vector<Invocation>> per_method;  // multisets
};

/// One execution of a harness: the outcome observed plus the
/// happens-before order between invocation indices (a before b iff a
/// returned before b started). Always contains the order induced by the
/// harness itself.
struct History {
  Harness harness;
  Outcome outcome;
  OrderPairs hb_invocations;
};

/// Syntax error with the offending input position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

/// Well-formedness violation (bad happens-before index, cycle, bad arity).
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Harness parse_harness(const std::string& text);
std::string format_harness(const Harness& h);

HarnessStats stats(const Harness& h);

/// Position of one invocation in the listing order that fixes outcome
/// slots: sequences in order, invocations within a sequence in order.
struct IndexedInvocation {
  int index;     // outcome slot
  int sequence;  // sequence index
  int position;  // position within the sequence
  const Invocation* invocation;
};
std::vector<IndexedInvocation> indexed_invocations(const Harness& h);
std::vector<IndexedInvocation> indexed_invocations(Harness&&) = delete;

/// Invocation-level order induced by the harness alone: program order
/// within each sequence plus the sequence-level constraints lifted to all
/// invocation pairs.
OrderPairs induced_invocation_order(const Harness& h);

/// h1 embeds into h2: an injection f over sequence indices maps every
/// sequence of h1 onto a prefix of a distinct sequence of h2, and h2 orders
/// every mapped sequence before every unmapped one.
bool is_prefix(const Harness& h1, const Harness& h2);

/// Representative of the harness's symmetry class (symmetric = equal up to
/// reordering sequences and renaming the happens-before constraints
/// accordingly). Picks the permutation minimizing (sequence texts,
/// happens-before pairs) lexicographically; idempotent.
Harness canonicalize(const Harness& h);

/// The harness with one singleton sequence per invocation of the history's
/// harness, whose sequence-level constraints encode the history's
/// invocation-level happens-before.
Harness singletonize(const History& hist);

/// Throws HarnessError on bad happens-before indices, reflexive or cyclic
/// constraints, or empty sequences.
void check_well_formed(const Harness& h);

}  // namespace atomcheck
