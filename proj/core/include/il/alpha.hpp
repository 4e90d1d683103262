#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "il/renaming.hpp"
#include "il/term.hpp"

namespace il {

// Witness for generalized alpha-equivalence: how the free variables of each
// side map to the other. The maps are mutually inverse on the respective
// free variables; label correspondence is positional.
struct AlphaMaps {
  Renaming forward;   // free variables, left to right
  Renaming backward;  // free variables, right to left
  std::vector<std::pair<Label, Label>> free_labels;
};

// Decides alpha-equivalence, synthesizing the free-variable maps from
// occurrences and matching binders positionally. Globals annotations are
// ignored. Returns nothing on any structural or mapping conflict.
std::optional<AlphaMaps> alpha_check(const Term& left, const Term& right);

}  // namespace il
