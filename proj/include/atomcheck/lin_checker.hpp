#pragma once

#include "atomcheck/adt_spec.hpp"
#include "atomcheck/harness.hpp"
#include "atomcheck/oracle.hpp"

namespace atomcheck {

/// Exhaustive search is exponential; histories above this size are
/// rejected rather than silently taking forever.
inline constexpr int kMaxCheckedInvocations = 10;

/// Weakest history of a harness for a given outcome: happens-before is
/// exactly the order induced by the harness itself.
History induced_history(const Harness& h, Outcome o);

/// Validates the History invariants: outcome width, and hb_invocations
/// containing the harness-induced order.
void check_history(const History& hist);

/// Brute-force linearizability: true iff some linear extension of the
/// history's happens-before, replayed on the sequential spec from the
/// empty state, reproduces the outcome exactly. Deliberately simple; used
/// as a validation oracle. Throws HarnessError when the history exceeds
/// kMaxCheckedInvocations.
bool is_linearizable(const History& hist, const SequentialSpec& spec);

/// is_linearizable on the weakest history; by definition this coincides
/// with membership of `o` in atomic_outcomes(h), which makes it the
/// independent cross-check of the outcome oracle.
bool harness_linearizable_outcome(const Harness& h, const Outcome& o,
                                  const SequentialSpec& spec);

}  // namespace atomcheck
