#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "il/term.hpp"

namespace il {

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

// Result of parsing a program. On failure `term` is null and `diagnostics`
// holds at least one entry. `ann` is non-null only when the input annotates
// every subterm with a live set.
struct ParseResult {
  TermPtr term;
  AnnPtr ann;
  std::vector<Diagnostic> diagnostics;
  std::unordered_map<const Term*, SourcePos> positions;

  bool ok() const { return term != nullptr; }
};

// Total: every input yields a term or a diagnostic.
//
// Grammar:
//   s ::= "let" VAR "=" (expr | "extern" ACTION) "in" s
//       | "if" expr "then" s "else" s
//       | "fun" LABEL "(" [VAR ("," VAR)*] ")" [":" varset] "=" s "in" s
//       | LABEL "(" [expr ("," expr)*] ")"
//       | expr
//   varset ::= "{" [VAR ("," VAR)*] "}"
//   Any s may be prefixed by a live-set annotation "@" varset.
//   Comments run from "//" to end of line.
ParseResult parse(std::string_view text);

std::string format_diagnostic(std::string_view file, const Diagnostic& d);

}  // namespace il
