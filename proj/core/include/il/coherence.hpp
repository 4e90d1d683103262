#pragma once

#include <optional>
#include <string>

#include "il/liveness.hpp"
#include "il/semantics.hpp"

namespace il {

// Decides the coherence judgment: only available functions may be applied,
// where a function stays available until one of its globals is rebound.
// Requires globals annotations on every function definition; the annotation
// tree contributes shape only.
bool coh_check(const GlobalsCtx& lam, const Term& s, const Ann& a);

struct CohFailure {
  const Term* node;
  std::string reason;
};

// Coherence with a located failure for diagnostics.
std::optional<CohFailure> coh_find_failure(const GlobalsCtx& lam, const Term& s,
                                           const Ann& a);

// Λ approximates Λ': wherever Λ is defined, the two agree.
bool approx(const GlobalsCtx& lam, const GlobalsCtx& other);

// All function bodies in closures are coherent and admit large enough live
// sets under assumptions approximated by the recorded globals. The
// existential liveness context is discharged by inference.
bool coh_ctx_check(const Ctx<Closure>& funcs, const GlobalsCtx& lam);

// Closure environments agree with the primary environment on each defined
// function's globals.
bool agree_check(const Ctx<Closure>& funcs, const Env& env,
                 const GlobalsCtx& lam);

// Globals context inferred entrywise from the bodies in a context.
std::optional<GlobalsCtx> infer_ctx_globals(const Ctx<Closure>& funcs);

}  // namespace il
