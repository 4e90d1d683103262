#pragma once

#include <optional>
#include <string>

#include "il/apart.hpp"
#include "il/liveness.hpp"
#include "il/renaming.hpp"
#include "il/term.hpp"

namespace il {

// The renaming is injective on the live set annotating every subterm.
bool inj_check(const Renaming& rho, const Term& s, const Ann& a);

// Image of the occurring variables (free or binding) under the renaming.
VarSet names_used(const Renaming& rho, const Term& s);

struct RassignOutcome {
  std::optional<Renaming> assignment;
  std::string error;  // names the violated precondition when empty assignment

  bool ok() const { return assignment.has_value(); }
};

// Names the first violated precondition, if any: the term must be renamed
// apart and free of unreachable code, the annotation must be a valid
// liveness result whose sets stay within scope, ambient globals must lie
// within the free variables, and the initial renaming must be injective on
// the root live set.
std::optional<std::string> rassign_preconditions(const Renaming& rho,
                                                 const Term& s, const Ann& a,
                                                 const GlobalsCtx& lam = {});

// Register assignment by structural recursion: each binder receives a
// variable fresh for the images of the variables live in its continuation.
// Correct for any freshness choice; the smallest-index choice realizes the
// max-live bound on the number of names.
RassignOutcome rassign(const Renaming& rho, const Term& s, const Ann& a,
                       FreshSource* fresh = nullptr,
                       const GlobalsCtx& lam = {});

}  // namespace il
