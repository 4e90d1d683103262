#pragma once

#include <optional>
#include <utility>

#include "il/context.hpp"
#include "il/semantics.hpp"
#include "il/term.hpp"

namespace il {

// Globals assumptions for labels: the variables a function body depends on
// beyond its parameters. A placeholder entry means undefined.
using GlobalsCtx = Ctx<VarSet>;

// Decides the liveness judgment: `live` holds the root set, and the
// annotation's node sets supply the intermediate sets of the derivation.
// False on shape mismatch, on missing globals annotations, and on
// application of an undefined label.
bool live_check(const GlobalsCtx& lam, const VarSet& live, const Term& s,
                const Ann& a);

// Minimal valid annotation for a term whose function definitions already
// carry globals. Returns the annotation and its root set.
std::optional<std::pair<AnnPtr, VarSet>> live_annotate(const GlobalsCtx& lam,
                                                       const Term& s);

struct LiveResult {
  TermPtr term;  // input with globals annotations filled in
  AnnPtr ann;
  VarSet root_live;
};

// Backward structural pass; globals of each function definition are computed
// by fixpoint iteration over the body. The result always satisfies
// live_check. Fails on duplicate parameters or application of an undefined
// label.
std::optional<LiveResult> live_infer(const TermPtr& s);

// A block context satisfies globals assumptions entrywise.
bool live_ctx_check(const Ctx<Block>& blocks, const GlobalsCtx& lam);

// Size of the largest live set in the annotation.
size_t max_live(const Ann& a);

// Every defined globals set lies within `allowed`.
bool globals_within(const GlobalsCtx& lam, const VarSet& allowed);

// Every annotation set mentions only `allowed` variables or variables bound
// above that node.
bool ann_within_scope(const Term& s, const Ann& a, const VarSet& allowed);

// Well-shaped annotation with empty sets everywhere; a placeholder where
// only the tree shape matters.
AnnPtr shape_ann(const Term& s);

}  // namespace il
