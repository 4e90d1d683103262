#include "il/term.hpp"

#include <algorithm>

#include "il/util.hpp"

namespace il {

TermPtr make_ret(ExprPtr e) {
  return std::make_shared<Term>(Term{Term::Ret{std::move(e)}});
}

TermPtr make_letv(Var x, ExtExpr rhs, TermPtr body) {
  return std::make_shared<Term>(Term{Term::LetVal{x, std::move(rhs), std::move(body)}});
}

TermPtr make_cond(ExprPtr guard, TermPtr then_branch, TermPtr else_branch) {
  return std::make_shared<Term>(
      Term{Term::Cond{std::move(guard), std::move(then_branch), std::move(else_branch)}});
}

TermPtr make_letfun(Label f, std::vector<Var> params,
                    std::optional<VarSet> globals, TermPtr body, TermPtr cont) {
  return std::make_shared<Term>(Term{Term::LetFun{
      f, std::move(params), std::move(globals), std::move(body), std::move(cont)}});
}

TermPtr make_app(Label f, std::vector<ExprPtr> args) {
  return std::make_shared<Term>(Term{Term::App{f, std::move(args)}});
}

VarSet free_vars(const Term& s) {
  return std::visit(
      overloaded{
          [](const Term::Ret& r) { return free_vars(*r.expr); },
          [](const Term::LetVal& l) {
            return free_vars(l.rhs).unioned(free_vars(*l.body).minus(l.var));
          },
          [](const Term::Cond& c) {
            return free_vars(*c.guard)
                .unioned(free_vars(*c.then_branch))
                .unioned(free_vars(*c.else_branch));
          },
          [](const Term::LetFun& f) {
            return free_vars(*f.body)
                .minus(f.params)
                .unioned(free_vars(*f.cont));
          },
          [](const Term::App& a) {
            return free_vars(std::span<const ExprPtr>(a.args));
          },
      },
      s.node);
}

VarSet bound_vars(const Term& s) {
  return std::visit(
      overloaded{
          [](const Term::Ret&) { return VarSet{}; },
          [](const Term::LetVal& l) {
            VarSet out = bound_vars(*l.body);
            out.insert(l.var);
            return out;
          },
          [](const Term::Cond& c) {
            return bound_vars(*c.then_branch).unioned(bound_vars(*c.else_branch));
          },
          [](const Term::LetFun& f) {
            VarSet out = bound_vars(*f.body).unioned(bound_vars(*f.cont));
            for (Var p : f.params) out.insert(p);
            return out;
          },
          [](const Term::App&) { return VarSet{}; },
      },
      s.node);
}

VarSet occ_vars(const Term& s) { return free_vars(s).unioned(bound_vars(s)); }

bool term_equal(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Term::Ret& x) {
            return expr_equal(*x.expr, *std::get<Term::Ret>(b.node).expr);
          },
          [&](const Term::LetVal& x) {
            const auto& y = std::get<Term::LetVal>(b.node);
            return x.var == y.var && ext_equal(x.rhs, y.rhs) &&
                   term_equal(*x.body, *y.body);
          },
          [&](const Term::Cond& x) {
            const auto& y = std::get<Term::Cond>(b.node);
            return expr_equal(*x.guard, *y.guard) &&
                   term_equal(*x.then_branch, *y.then_branch) &&
                   term_equal(*x.else_branch, *y.else_branch);
          },
          [&](const Term::LetFun& x) {
            const auto& y = std::get<Term::LetFun>(b.node);
            return x.fn == y.fn && x.params == y.params &&
                   x.globals == y.globals && term_equal(*x.body, *y.body) &&
                   term_equal(*x.cont, *y.cont);
          },
          [&](const Term::App& x) {
            const auto& y = std::get<Term::App>(b.node);
            if (x.fn != y.fn || x.args.size() != y.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
              if (!expr_equal(*x.args[i], *y.args[i])) return false;
            return true;
          },
      },
      a.node);
}

bool params_wellformed(const Term& s) {
  return std::visit(
      overloaded{
          [](const Term::Ret&) { return true; },
          [](const Term::LetVal& l) { return params_wellformed(*l.body); },
          [](const Term::Cond& c) {
            return params_wellformed(*c.then_branch) &&
                   params_wellformed(*c.else_branch);
          },
          [](const Term::LetFun& f) {
            VarSet seen;
            for (Var p : f.params) {
              if (seen.contains(p)) return false;
              seen.insert(p);
            }
            return params_wellformed(*f.body) && params_wellformed(*f.cont);
          },
          [](const Term::App&) { return true; },
      },
      s.node);
}

AnnPtr make_ann(VarSet live, std::vector<AnnPtr> children) {
  return std::make_shared<Ann>(Ann{std::move(live), std::move(children)});
}

bool ann_wellformed(const Term& s, const Ann& a) {
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return a.children.empty(); },
          [&](const Term::LetVal& l) {
            return a.children.size() == 1 &&
                   ann_wellformed(*l.body, *a.children[0]);
          },
          [&](const Term::Cond& c) {
            return a.children.size() == 2 &&
                   ann_wellformed(*c.then_branch, *a.children[0]) &&
                   ann_wellformed(*c.else_branch, *a.children[1]);
          },
          [&](const Term::LetFun& f) {
            return a.children.size() == 2 &&
                   ann_wellformed(*f.body, *a.children[0]) &&
                   ann_wellformed(*f.cont, *a.children[1]);
          },
          [&](const Term::App&) { return a.children.empty(); },
      },
      s.node);
}

bool ann_equal(const Ann& a, const Ann& b) {
  if (!(a.live == b.live) || a.children.size() != b.children.size())
    return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!ann_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

size_t term_size(const Term& s) {
  return std::visit(
      overloaded{
          [](const Term::Ret&) -> size_t { return 1; },
          [](const Term::LetVal& l) { return 1 + term_size(*l.body); },
          [](const Term::Cond& c) {
            return 1 + term_size(*c.then_branch) + term_size(*c.else_branch);
          },
          [](const Term::LetFun& f) {
            return 1 + term_size(*f.body) + term_size(*f.cont);
          },
          [](const Term::App&) -> size_t { return 1; },
      },
      s.node);
}

ExprPtr rename_expr(const Renaming& rho, const Expr& e) {
  return std::visit(
      overloaded{
          [&](const Expr::Lit& l) { return lit(l.value); },
          [&](const Expr::Ref& r) { return ref(rho(r.var)); },
          [&](const Expr::Bin& b) {
            return bin(b.op, rename_expr(rho, *b.lhs), rename_expr(rho, *b.rhs));
          },
      },
      e.node);
}

namespace {

ExtExpr rename_ext(const Renaming& rho, const ExtExpr& e) {
  if (e.is_expr()) return ext(rename_expr(rho, *e.expr()));
  return e;
}

}  // namespace

TermPtr rename_term(const Renaming& rho, const Term& s) {
  return std::visit(
      overloaded{
          [&](const Term::Ret& r) { return make_ret(rename_expr(rho, *r.expr)); },
          [&](const Term::LetVal& l) {
            return make_letv(rho(l.var), rename_ext(rho, l.rhs),
                             rename_term(rho, *l.body));
          },
          [&](const Term::Cond& c) {
            return make_cond(rename_expr(rho, *c.guard),
                             rename_term(rho, *c.then_branch),
                             rename_term(rho, *c.else_branch));
          },
          [&](const Term::LetFun& f) {
            std::vector<Var> params;
            params.reserve(f.params.size());
            for (Var p : f.params) params.push_back(rho(p));
            std::optional<VarSet> globals;
            if (f.globals) globals = rho(*f.globals);
            return make_letfun(f.fn, std::move(params), std::move(globals),
                               rename_term(rho, *f.body),
                               rename_term(rho, *f.cont));
          },
          [&](const Term::App& a) {
            std::vector<ExprPtr> args;
            args.reserve(a.args.size());
            for (const auto& e : a.args) args.push_back(rename_expr(rho, *e));
            return make_app(a.fn, std::move(args));
          },
      },
      s.node);
}

AnnPtr rename_ann(const Renaming& rho, const Ann& a) {
  std::vector<AnnPtr> children;
  children.reserve(a.children.size());
  for (const auto& c : a.children) children.push_back(rename_ann(rho, *c));
  return make_ann(rho(a.live), std::move(children));
}

Ctx<VarSet> rename_ctx(const Renaming& rho, const Ctx<VarSet>& lam) {
  Ctx<VarSet> out;
  for (const auto& e : lam) {
    if (e.value.has_value())
      out.push(e.name, rho(*e.value));
    else
      out.push(e.name, std::nullopt);
  }
  return out;
}

TermPtr strip_globals(const Term& s) {
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return std::make_shared<const Term>(s); },
          [&](const Term::LetVal& l) {
            return make_letv(l.var, l.rhs, strip_globals(*l.body));
          },
          [&](const Term::Cond& c) {
            return make_cond(c.guard, strip_globals(*c.then_branch),
                             strip_globals(*c.else_branch));
          },
          [&](const Term::LetFun& f) {
            return make_letfun(f.fn, f.params, std::nullopt,
                               strip_globals(*f.body), strip_globals(*f.cont));
          },
          [&](const Term::App&) { return std::make_shared<const Term>(s); },
      },
      s.node);
}

}  // namespace il
