#include "il/rassign.hpp"

#include "il/util.hpp"

namespace il {

bool inj_check(const Renaming& rho, const Term& s, const Ann& a) {
  if (!ann_wellformed(s, a)) return false;
  if (!rho.injective_on(a.live)) return false;
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return true; },
          [&](const Term::App&) { return true; },
          [&](const Term::LetVal& l) {
            return inj_check(rho, *l.body, *a.children[0]);
          },
          [&](const Term::Cond& c) {
            return inj_check(rho, *c.then_branch, *a.children[0]) &&
                   inj_check(rho, *c.else_branch, *a.children[1]);
          },
          [&](const Term::LetFun& f) {
            return inj_check(rho, *f.body, *a.children[0]) &&
                   inj_check(rho, *f.cont, *a.children[1]);
          },
      },
      s.node);
}

VarSet names_used(const Renaming& rho, const Term& s) {
  return rho(occ_vars(s));
}

std::optional<std::string> rassign_preconditions(const Renaming& rho,
                                                 const Term& s, const Ann& a,
                                                 const GlobalsCtx& lam) {
  if (!ann_wellformed(s, a)) return "annotation shape mismatch";
  VarSet free = free_vars(s);
  if (!apart_check(free, s)) return "term is not renamed apart";
  if (!reachable_check(s)) return "unreachable function definition";
  if (!live_check(lam, a.live, s, a)) return "invalid liveness annotation";
  if (!globals_within(lam, free)) return "ambient globals exceed free variables";
  if (!ann_within_scope(s, a, free)) return "annotation mentions out-of-scope variables";
  if (!rho.injective_on(a.live)) return "initial renaming not injective on root live set";
  return std::nullopt;
}

namespace {

Renaming assign_rec(Renaming rho, const Term& s, const Ann& a,
                    FreshSource& fresh) {
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return rho; },
          [&](const Term::App&) { return rho; },
          [&](const Term::LetVal& l) {
            const Ann& body = *a.children[0];
            Var y = fresh.fresh(rho(body.live.minus(l.var)), l.var);
            return assign_rec(rho.with(l.var, y), *l.body, body, fresh);
          },
          [&](const Term::Cond& c) {
            Renaming mid =
                assign_rec(rho, *c.then_branch, *a.children[0], fresh);
            return assign_rec(std::move(mid), *c.else_branch, *a.children[1],
                              fresh);
          },
          [&](const Term::LetFun& f) {
            const Ann& body = *a.children[0];
            VarSet avoid = rho(body.live.minus(f.params));
            std::vector<Var> images = freshlist(fresh, avoid, f.params);
            Renaming inner = rho;
            for (size_t i = 0; i < f.params.size(); ++i)
              inner.set(f.params[i], images[i]);
            Renaming mid = assign_rec(std::move(inner), *f.body, body, fresh);
            return assign_rec(std::move(mid), *f.cont, *a.children[1], fresh);
          },
      },
      s.node);
}

}  // namespace

RassignOutcome rassign(const Renaming& rho, const Term& s, const Ann& a,
                       FreshSource* fresh, const GlobalsCtx& lam) {
  if (auto error = rassign_preconditions(rho, s, a, lam))
    return {std::nullopt, *error};
  SmallestIndexFresh smallest;
  Renaming out = assign_rec(rho, s, a, fresh != nullptr ? *fresh : smallest);
  return {std::move(out), ""};
}

}  // namespace il
