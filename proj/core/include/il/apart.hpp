#pragma once

#include <optional>
#include <span>
#include <vector>

#include "il/renaming.hpp"
#include "il/term.hpp"

namespace il {

// Chooses a variable outside the avoid set. The hint may guide the display
// name; correctness never depends on it.
class FreshSource {
 public:
  virtual ~FreshSource() = default;
  virtual Var fresh(const VarSet& avoid, Var hint) = 0;
};

// The smallest-index variable outside the set; its index never exceeds the
// set's size. This is the choice the register bound depends on.
class SmallestIndexFresh : public FreshSource {
 public:
  Var fresh(const VarSet& avoid, Var hint) override;
};

// Keeps the hinted name when it is free, otherwise derives a primed variant.
// Used when renaming apart, where readable stable output matters.
class MintingFresh : public FreshSource {
 public:
  Var fresh(const VarSet& avoid, Var hint) override;
};

Var fresh_smallest(const VarSet& avoid);

// n pairwise-distinct variables disjoint from avoid, by iterating fresh.
std::vector<Var> freshlist(FreshSource& source, const VarSet& avoid,
                           std::span<const Var> hints);
std::vector<Var> freshlist_smallest(const VarSet& avoid, size_t n);

// Decides the renamed-apart judgment under scope `within`: every binder is
// distinct from the scope, from free variables, and from every other
// binder. Returns the set of binding occurrences, or nothing on violation.
std::optional<VarSet> apart_check(const VarSet& within, const Term& s);

struct ApartResult {
  VarSet new_binders;
  TermPtr term;
};

// Renames a term apart: fresh binder per binding, scope threaded
// left-to-right through branches. Requires rho(fv(s)) within scope. The
// output passes apart_check and is alpha-equivalent to the input; globals
// annotations are dropped for later re-inference.
std::optional<ApartResult> rename_apart(const Renaming& rho,
                                        const VarSet& scope, const Term& s,
                                        FreshSource* fresh = nullptr);

// Every function definition's label is applied somewhere in its
// continuation (syntactically, honoring label shadowing).
bool reachable_check(const Term& s);

// Replaces function definitions whose label is never applied in their
// continuation by the continuation itself.
TermPtr prune_unreachable(const Term& s);

}  // namespace il
