#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "il/context.hpp"
#include "il/expr.hpp"
#include "il/renaming.hpp"
#include "il/symbols.hpp"

namespace il {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// The five term forms. Function definitions optionally carry a globals
// annotation: the variables the body depends on beyond its parameters.
struct Term {
  struct Ret {
    ExprPtr expr;
  };
  struct LetVal {
    Var var;
    ExtExpr rhs;
    TermPtr body;
  };
  struct Cond {
    ExprPtr guard;
    TermPtr then_branch;
    TermPtr else_branch;
  };
  struct LetFun {
    Label fn;
    std::vector<Var> params;
    std::optional<VarSet> globals;
    TermPtr body;
    TermPtr cont;
  };
  struct App {
    Label fn;
    std::vector<ExprPtr> args;
  };

  std::variant<Ret, LetVal, Cond, LetFun, App> node;
};

TermPtr make_ret(ExprPtr e);
TermPtr make_letv(Var x, ExtExpr rhs, TermPtr body);
TermPtr make_cond(ExprPtr guard, TermPtr then_branch, TermPtr else_branch);
TermPtr make_letfun(Label f, std::vector<Var> params,
                    std::optional<VarSet> globals, TermPtr body, TermPtr cont);
TermPtr make_app(Label f, std::vector<ExprPtr> args);

// Variable binding discipline: a let binds its variable in the continuation;
// parameters bind in the function body only.
VarSet free_vars(const Term& s);
VarSet bound_vars(const Term& s);
VarSet occ_vars(const Term& s);

bool term_equal(const Term& a, const Term& b);

// Duplicate-free parameter lists, everywhere.
bool params_wellformed(const Term& s);

// Annotation tree carrying one live set per subterm. The arity of each node
// mirrors the term constructor: 0 children for return/application, 1 for a
// variable binding, 2 for conditional and function definition.
struct Ann;
using AnnPtr = std::shared_ptr<const Ann>;

struct Ann {
  VarSet live;
  std::vector<AnnPtr> children;
};

AnnPtr make_ann(VarSet live, std::vector<AnnPtr> children = {});

bool ann_wellformed(const Term& s, const Ann& a);
bool ann_equal(const Ann& a, const Ann& b);
size_t term_size(const Term& s);

// Applies a renaming to every variable occurrence, binding and free; labels
// are untouched. Globals annotations are mapped pointwise. Intended for
// renamed-apart terms, where a single function expresses a consistent
// renaming.
ExprPtr rename_expr(const Renaming& rho, const Expr& e);
TermPtr rename_term(const Renaming& rho, const Term& s);
AnnPtr rename_ann(const Renaming& rho, const Ann& a);
Ctx<VarSet> rename_ctx(const Renaming& rho, const Ctx<VarSet>& lam);

// Copy of the term with all globals annotations removed / replaced.
TermPtr strip_globals(const Term& s);

}  // namespace il
