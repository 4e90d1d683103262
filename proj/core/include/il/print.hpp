#pragma once

#include <string>

#include "il/term.hpp"

namespace il {

// Deterministic layout; the output parses back to the same term and
// annotation. Passing an annotation requires it to be well-formed for the
// term.
std::string print(const Term& s, const Ann* ann = nullptr);
std::string print(const TermPtr& s, const AnnPtr& ann = nullptr);

std::string print_expr(const Expr& e);

}  // namespace il
