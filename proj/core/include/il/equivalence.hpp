#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "il/semantics.hpp"

namespace il {

// Finite observation: external events followed by "still running" (open), or
// by a terminal result (which may be failure). Silent steps leave no record.
struct PartialTrace {
  std::vector<ExtEvent> events;
  bool open = true;
  std::optional<Value> result;  // meaningful only when !open

  friend auto operator<=>(const PartialTrace&, const PartialTrace&) = default;
};

std::string to_string(const PartialTrace& t);

struct TraceSet {
  std::set<PartialTrace> items;
  bool complete = true;  // false if any branch was cut off by fuel or budget
};

inline constexpr size_t kDefaultTraceBudget = size_t{1} << 20;

// Every trace derivable within `fuel` transitions per branch, with external
// results drawn from `domain`. Each visited state contributes its open
// prefix; terminal states contribute their result.
TraceSet traces(const Configuration& c, size_t fuel,
                std::span<const Value> domain,
                size_t node_budget = kDefaultTraceBudget);

enum class Verdict { Equivalent, Inequivalent, Unknown };

// Bounded three-valued answer. Inequivalent carries a trace produced by
// exactly one side; Equivalent means equal within the explored bound.
struct EquivVerdict {
  Verdict verdict = Verdict::Unknown;
  std::optional<PartialTrace> witness;
  int witness_side = 0;  // 1 or 2

  bool equivalent() const { return verdict == Verdict::Equivalent; }
  bool inequivalent() const { return verdict == Verdict::Inequivalent; }
  bool unknown() const { return verdict == Verdict::Unknown; }
};

// Compares the bounded trace sets. Definite inequivalence requires a trace
// unique to one side that the other side conclusively cannot produce within
// the fuel bound; everything else that differs is Unknown.
EquivVerdict trace_equiv(const Configuration& c1, const Configuration& c2,
                         size_t fuel, std::span<const Value> domain,
                         size_t node_budget = kDefaultTraceBudget);

inline constexpr size_t kDefaultBisimBudget = size_t{1} << 17;

// Bounded coinduction: advance both sides silently to a commitment point
// (terminal or ready), match results or events, and recurse over every
// domain value. Revisited configuration pairs close coinductively. The work
// budget caps total steps across branches; exhausting it yields Unknown.
EquivVerdict bisim(const Configuration& c1, const Configuration& c2,
                   size_t fuel, std::span<const Value> domain,
                   size_t work_budget = kDefaultBisimBudget);

// Functional versus imperative reading of the same term under the same
// environment.
EquivVerdict invariance_check(const TermPtr& s, const Env& env, size_t fuel,
                              std::span<const Value> domain);

}  // namespace il
