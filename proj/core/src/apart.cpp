#include "il/apart.hpp"

#include <string>

#include "il/util.hpp"

namespace il {

Var SmallestIndexFresh::fresh(const VarSet& avoid, Var) {
  for (uint32_t i = 0;; ++i) {
    Var v = var_at(i);
    if (!avoid.contains(v)) return v;
  }
}

Var MintingFresh::fresh(const VarSet& avoid, Var hint) {
  if (!avoid.contains(hint)) return hint;
  std::string base = name(hint);
  for (int i = 1;; ++i) {
    std::string candidate =
        i <= 3 ? base + std::string(static_cast<size_t>(i), '\'')
               : base + "_" + std::to_string(i);
    Var v = var(candidate);
    if (!avoid.contains(v)) return v;
  }
}

Var fresh_smallest(const VarSet& avoid) {
  SmallestIndexFresh source;
  return source.fresh(avoid, Var{});
}

std::vector<Var> freshlist(FreshSource& source, const VarSet& avoid,
                           std::span<const Var> hints) {
  std::vector<Var> out;
  out.reserve(hints.size());
  VarSet taken = avoid;
  for (Var hint : hints) {
    Var v = source.fresh(taken, hint);
    taken.insert(v);
    out.push_back(v);
  }
  return out;
}

std::vector<Var> freshlist_smallest(const VarSet& avoid, size_t n) {
  SmallestIndexFresh source;
  std::vector<Var> hints(n, Var{});
  return freshlist(source, avoid, hints);
}

std::optional<VarSet> apart_check(const VarSet& within, const Term& s) {
  using Out = std::optional<VarSet>;
  return std::visit(
      overloaded{
          [&](const Term::Ret& r) -> Out {
            if (!free_vars(*r.expr).subset_of(within)) return std::nullopt;
            return VarSet{};
          },
          [&](const Term::App& a) -> Out {
            if (!free_vars(std::span<const ExprPtr>(a.args)).subset_of(within))
              return std::nullopt;
            return VarSet{};
          },
          [&](const Term::LetVal& l) -> Out {
            if (!free_vars(l.rhs).subset_of(within)) return std::nullopt;
            if (within.contains(l.var)) return std::nullopt;
            VarSet inner = within;
            inner.insert(l.var);
            auto body = apart_check(inner, *l.body);
            if (!body) return std::nullopt;
            VarSet out = *body;
            out.insert(l.var);
            return out;
          },
          [&](const Term::Cond& c) -> Out {
            if (!free_vars(*c.guard).subset_of(within)) return std::nullopt;
            auto t = apart_check(within, *c.then_branch);
            if (!t) return std::nullopt;
            auto e = apart_check(within, *c.else_branch);
            if (!e) return std::nullopt;
            if (!t->disjoint(*e)) return std::nullopt;
            return t->unioned(*e);
          },
          [&](const Term::LetFun& f) -> Out {
            VarSet params;
            for (Var p : f.params) {
              if (params.contains(p)) return std::nullopt;  // unique
              params.insert(p);
            }
            if (!params.disjoint(within)) return std::nullopt;
            auto body = apart_check(within.unioned(params), *f.body);
            if (!body) return std::nullopt;
            auto cont = apart_check(within, *f.cont);
            if (!cont) return std::nullopt;
            if (!body->unioned(params).disjoint(*cont)) return std::nullopt;
            return body->unioned(*cont).unioned(params);
          },
      },
      s.node);
}

namespace {

ExtExpr rename_rhs(const Renaming& rho, const ExtExpr& rhs) {
  if (rhs.is_expr()) return ext(rename_expr(rho, *rhs.expr()));
  return rhs;
}

ApartResult apart_rec(const Renaming& rho, const VarSet& scope, const Term& s,
                      FreshSource& fresh) {
  return std::visit(
      overloaded{
          [&](const Term::Ret& r) -> ApartResult {
            return {VarSet{}, make_ret(rename_expr(rho, *r.expr))};
          },
          [&](const Term::App& a) -> ApartResult {
            std::vector<ExprPtr> args;
            args.reserve(a.args.size());
            for (const auto& e : a.args) args.push_back(rename_expr(rho, *e));
            return {VarSet{}, make_app(a.fn, std::move(args))};
          },
          [&](const Term::LetVal& l) -> ApartResult {
            Var y = fresh.fresh(scope, l.var);
            VarSet inner = scope;
            inner.insert(y);
            ApartResult body = apart_rec(rho.with(l.var, y), inner, *l.body, fresh);
            VarSet binders = body.new_binders;
            binders.insert(y);
            return {binders, make_letv(y, rename_rhs(rho, l.rhs), body.term)};
          },
          [&](const Term::Cond& c) -> ApartResult {
            ApartResult t = apart_rec(rho, scope, *c.then_branch, fresh);
            ApartResult e =
                apart_rec(rho, scope.unioned(t.new_binders), *c.else_branch, fresh);
            return {t.new_binders.unioned(e.new_binders),
                    make_cond(rename_expr(rho, *c.guard), t.term, e.term)};
          },
          [&](const Term::LetFun& f) -> ApartResult {
            std::vector<Var> fresh_params = freshlist(fresh, scope, f.params);
            Renaming body_rho = rho;
            VarSet param_set;
            for (size_t i = 0; i < f.params.size(); ++i) {
              body_rho.set(f.params[i], fresh_params[i]);
              param_set.insert(fresh_params[i]);
            }
            ApartResult body =
                apart_rec(body_rho, scope.unioned(param_set), *f.body, fresh);
            ApartResult cont = apart_rec(
                rho, scope.unioned(body.new_binders).unioned(param_set),
                *f.cont, fresh);
            return {
                body.new_binders.unioned(cont.new_binders).unioned(param_set),
                make_letfun(f.fn, std::move(fresh_params), std::nullopt,
                            body.term, cont.term)};
          },
      },
      s.node);
}

}  // namespace

std::optional<ApartResult> rename_apart(const Renaming& rho,
                                        const VarSet& scope, const Term& s,
                                        FreshSource* fresh) {
  if (!rho(free_vars(s)).subset_of(scope)) return std::nullopt;
  MintingFresh minting;
  return apart_rec(rho, scope, s, fresh != nullptr ? *fresh : minting);
}

namespace {

// Does the label occur applied in t? Definitions of the same name shadow it.
bool applied_in(Label fn, const Term& t) {
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return false; },
          [&](const Term::App& a) { return a.fn == fn; },
          [&](const Term::LetVal& l) { return applied_in(fn, *l.body); },
          [&](const Term::Cond& c) {
            return applied_in(fn, *c.then_branch) ||
                   applied_in(fn, *c.else_branch);
          },
          [&](const Term::LetFun& f) {
            if (f.fn == fn) return false;
            return applied_in(fn, *f.body) || applied_in(fn, *f.cont);
          },
      },
      t.node);
}

}  // namespace

bool reachable_check(const Term& s) {
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return true; },
          [&](const Term::App&) { return true; },
          [&](const Term::LetVal& l) { return reachable_check(*l.body); },
          [&](const Term::Cond& c) {
            return reachable_check(*c.then_branch) &&
                   reachable_check(*c.else_branch);
          },
          [&](const Term::LetFun& f) {
            return applied_in(f.fn, *f.cont) && reachable_check(*f.body) &&
                   reachable_check(*f.cont);
          },
      },
      s.node);
}

TermPtr prune_unreachable(const Term& s) {
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return std::make_shared<const Term>(s); },
          [&](const Term::App&) { return std::make_shared<const Term>(s); },
          [&](const Term::LetVal& l) {
            return make_letv(l.var, l.rhs, prune_unreachable(*l.body));
          },
          [&](const Term::Cond& c) {
            return make_cond(c.guard, prune_unreachable(*c.then_branch),
                             prune_unreachable(*c.else_branch));
          },
          [&](const Term::LetFun& f) {
            TermPtr cont = prune_unreachable(*f.cont);
            if (!applied_in(f.fn, *cont)) return cont;
            return make_letfun(f.fn, f.params, f.globals,
                               prune_unreachable(*f.body), cont);
          },
      },
      s.node);
}

}  // namespace il
