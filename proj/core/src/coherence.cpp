#include "il/coherence.hpp"

#include "il/util.hpp"

namespace il {

namespace {

std::optional<CohFailure> coh_rec(const GlobalsCtx& lam, const Term& s,
                                  const Ann& a) {
  using Out = std::optional<CohFailure>;
  return std::visit(
      overloaded{
          [&](const Term::Ret&) -> Out { return std::nullopt; },
          [&](const Term::App& app) -> Out {
            if (!lam.lookup(app.fn))
              return CohFailure{&s, "applied function '" + name(app.fn) +
                                        "' is not available"};
            return std::nullopt;
          },
          [&](const Term::LetVal& l) -> Out {
            // Rebinding a variable kills every function using it as a global.
            return coh_rec(ctx_restrict_without(lam, l.var), *l.body,
                           *a.children[0]);
          },
          [&](const Term::Cond& c) -> Out {
            if (auto f = coh_rec(lam, *c.then_branch, *a.children[0])) return f;
            return coh_rec(lam, *c.else_branch, *a.children[1]);
          },
          [&](const Term::LetFun& f) -> Out {
            if (!f.globals)
              return CohFailure{&s, "function '" + name(f.fn) +
                                        "' lacks a globals annotation"};
            GlobalsCtx inner = lam.pushed(f.fn, *f.globals);
            if (auto fail = coh_rec(ctx_restrict(inner, *f.globals), *f.body,
                                    *a.children[0]))
              return fail;
            return coh_rec(inner, *f.cont, *a.children[1]);
          },
      },
      s.node);
}

}  // namespace

std::optional<CohFailure> coh_find_failure(const GlobalsCtx& lam, const Term& s,
                                           const Ann& a) {
  if (!ann_wellformed(s, a))
    return CohFailure{&s, "annotation shape does not match the term"};
  return coh_rec(lam, s, a);
}

bool coh_check(const GlobalsCtx& lam, const Term& s, const Ann& a) {
  return !coh_find_failure(lam, s, a).has_value();
}

bool approx(const GlobalsCtx& lam, const GlobalsCtx& other) {
  for (const auto& e : lam) {
    auto mine = lam.lookup(e.name);
    if (!mine) continue;  // placeholder entries impose no constraint
    auto theirs = other.lookup(e.name);
    if (!theirs || !(*theirs == *mine)) return false;
  }
  return true;
}

namespace {

// Fixpoint globals of one body under assumptions for enclosing labels.
std::optional<VarSet> infer_globals(const GlobalsCtx& lam, Label fn,
                                    const std::vector<Var>& params,
                                    const Term& body) {
  VarSet globals = free_vars(body).minus(params);
  size_t cap = occ_vars(body).size() + globals.size() + 2;
  for (size_t iter = 0; iter <= cap; ++iter) {
    auto ann = live_annotate(lam.pushed(fn, globals), body);
    if (!ann) return std::nullopt;
    VarSet next = globals.unioned(ann->second.minus(VarSet(std::span<const Var>(params))));
    if (next == globals) return globals;
    globals = std::move(next);
  }
  return std::nullopt;
}

}  // namespace

std::optional<GlobalsCtx> infer_ctx_globals(const Ctx<Closure>& funcs) {
  GlobalsCtx out;
  for (const auto& e : funcs) {
    if (!e.value.has_value()) {
      out.push(e.name, std::nullopt);
      continue;
    }
    auto globals = infer_globals(out, e.name, e.value->params, *e.value->body);
    if (!globals) return std::nullopt;
    out.push(e.name, *globals);
  }
  return out;
}

bool coh_ctx_check(const Ctx<Closure>& funcs, const GlobalsCtx& lam) {
  if (funcs.size() != lam.size()) return false;
  if (funcs.empty()) return true;
  size_t last = funcs.size() - 1;
  const auto& fn_entry = funcs[last];
  const auto& lam_entry = lam[last];
  if (fn_entry.name != lam_entry.name) return false;
  if (!lam_entry.value.has_value())
    return coh_ctx_check(funcs.prefix(last), lam.prefix(last));
  if (!fn_entry.value.has_value()) return false;

  const Closure& closure = *fn_entry.value;
  const VarSet& globals = *lam_entry.value;
  VarSet params{std::span<const Var>(closure.params)};
  if (!globals.disjoint(params)) return false;

  GlobalsCtx assumed = lam.prefix(last).pushed(lam_entry.name, globals);
  AnnPtr shape = shape_ann(*closure.body);
  if (!coh_check(ctx_restrict(assumed, globals), *closure.body, *shape))
    return false;

  // Discharge the existential liveness assumptions with inferred globals.
  auto inferred_prefix = infer_ctx_globals(funcs.prefix(last));
  if (!inferred_prefix) return false;
  auto self = infer_globals(*inferred_prefix, fn_entry.name, closure.params,
                            *closure.body);
  if (!self) return false;
  GlobalsCtx inferred = inferred_prefix->pushed(fn_entry.name, *self);
  if (!approx(assumed, inferred)) return false;

  auto ann = live_annotate(inferred, *closure.body);
  if (!ann) return false;
  VarSet root = globals.unioned(params);
  if (!ann->second.subset_of(root)) return false;
  AnnPtr rooted = make_ann(root, ann->first->children);
  if (!live_check(inferred, root, *closure.body, *rooted)) return false;

  return coh_ctx_check(funcs.prefix(last), lam.prefix(last));
}

bool agree_check(const Ctx<Closure>& funcs, const Env& env,
                 const GlobalsCtx& lam) {
  for (const auto& e : funcs) {
    auto globals = lam.lookup(e.name);
    if (!globals) continue;
    auto closure = funcs.lookup(e.name);
    if (!closure) continue;
    if (!closure->env.agrees_on(env, *globals)) return false;
  }
  return true;
}

}  // namespace il
