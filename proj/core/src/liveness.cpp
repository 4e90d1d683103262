#include "il/liveness.hpp"

#include "il/util.hpp"

namespace il {

namespace {

VarSet param_set(const std::vector<Var>& params) {
  return VarSet(std::span<const Var>(params));
}

bool check_node(const GlobalsCtx& lam, const Term& s, const Ann& a) {
  const VarSet& live = a.live;
  return std::visit(
      overloaded{
          [&](const Term::Ret& r) { return free_vars(*r.expr).subset_of(live); },
          [&](const Term::App& app) {
            auto globals = lam.lookup(app.fn);
            if (!globals) return false;
            return globals->subset_of(live) &&
                   free_vars(std::span<const ExprPtr>(app.args)).subset_of(live);
          },
          [&](const Term::LetVal& l) {
            const Ann& body = *a.children[0];
            // The bound variable must be live in the continuation.
            return free_vars(l.rhs).subset_of(live) &&
                   body.live.minus(l.var).subset_of(live) &&
                   body.live.contains(l.var) && check_node(lam, *l.body, body);
          },
          [&](const Term::Cond& c) {
            const Ann& t = *a.children[0];
            const Ann& e = *a.children[1];
            return free_vars(*c.guard).subset_of(live) &&
                   t.live.unioned(e.live).subset_of(live) &&
                   check_node(lam, *c.then_branch, t) &&
                   check_node(lam, *c.else_branch, e);
          },
          [&](const Term::LetFun& f) {
            if (!f.globals) return false;
            const VarSet& globals = *f.globals;
            VarSet params = param_set(f.params);
            if (!globals.disjoint(params)) return false;
            const Ann& body = *a.children[0];
            const Ann& cont = *a.children[1];
            GlobalsCtx inner = lam.pushed(f.fn, globals);
            // The body's live set is exactly globals plus parameters.
            return body.live == globals.unioned(params) &&
                   check_node(inner, *f.body, body) &&
                   cont.live.subset_of(live) &&
                   check_node(inner, *f.cont, cont);
          },
      },
      s.node);
}

AnnPtr with_root(const AnnPtr& a, VarSet root) {
  return make_ann(std::move(root), a->children);
}

}  // namespace

bool live_check(const GlobalsCtx& lam, const VarSet& live, const Term& s,
                const Ann& a) {
  if (!ann_wellformed(s, a)) return false;
  if (!(a.live == live)) return false;
  return check_node(lam, s, a);
}

std::optional<std::pair<AnnPtr, VarSet>> live_annotate(const GlobalsCtx& lam,
                                                       const Term& s) {
  using Out = std::optional<std::pair<AnnPtr, VarSet>>;
  return std::visit(
      overloaded{
          [&](const Term::Ret& r) -> Out {
            VarSet live = free_vars(*r.expr);
            return std::pair{make_ann(live), live};
          },
          [&](const Term::App& app) -> Out {
            auto globals = lam.lookup(app.fn);
            if (!globals) return std::nullopt;
            VarSet live = globals->unioned(
                free_vars(std::span<const ExprPtr>(app.args)));
            return std::pair{make_ann(live), live};
          },
          [&](const Term::LetVal& l) -> Out {
            auto body = live_annotate(lam, *l.body);
            if (!body) return std::nullopt;
            VarSet body_live = body->second;
            body_live.insert(l.var);
            VarSet live = free_vars(l.rhs).unioned(body_live.minus(l.var));
            return std::pair{
                make_ann(live, {with_root(body->first, body_live)}), live};
          },
          [&](const Term::Cond& c) -> Out {
            auto t = live_annotate(lam, *c.then_branch);
            if (!t) return std::nullopt;
            auto e = live_annotate(lam, *c.else_branch);
            if (!e) return std::nullopt;
            VarSet live =
                free_vars(*c.guard).unioned(t->second).unioned(e->second);
            return std::pair{make_ann(live, {t->first, e->first}), live};
          },
          [&](const Term::LetFun& f) -> Out {
            if (!f.globals) return std::nullopt;
            VarSet params = param_set(f.params);
            if (!f.globals->disjoint(params)) return std::nullopt;
            GlobalsCtx inner = lam.pushed(f.fn, *f.globals);
            auto body = live_annotate(inner, *f.body);
            if (!body) return std::nullopt;
            VarSet body_live = f.globals->unioned(params);
            if (!body->second.subset_of(body_live)) return std::nullopt;
            auto cont = live_annotate(inner, *f.cont);
            if (!cont) return std::nullopt;
            return std::pair{
                make_ann(cont->second,
                         {with_root(body->first, body_live), cont->first}),
                cont->second};
          },
      },
      s.node);
}

namespace {

struct InferResult {
  TermPtr term;
  AnnPtr ann;
  VarSet live;
};

std::optional<InferResult> infer_rec(const GlobalsCtx& lam, const VarSet& scope,
                                     const Term& s) {
  using Out = std::optional<InferResult>;
  return std::visit(
      overloaded{
          [&](const Term::Ret& r) -> Out {
            VarSet live = free_vars(*r.expr);
            return InferResult{std::make_shared<const Term>(s), make_ann(live), live};
          },
          [&](const Term::App& app) -> Out {
            auto globals = lam.lookup(app.fn);
            if (!globals) return std::nullopt;
            VarSet live = globals->unioned(
                free_vars(std::span<const ExprPtr>(app.args)));
            return InferResult{std::make_shared<const Term>(s), make_ann(live), live};
          },
          [&](const Term::LetVal& l) -> Out {
            VarSet body_scope = scope;
            body_scope.insert(l.var);
            auto body = infer_rec(lam, body_scope, *l.body);
            if (!body) return std::nullopt;
            VarSet body_live = body->live;
            body_live.insert(l.var);
            VarSet live = free_vars(l.rhs).unioned(body_live.minus(l.var));
            return InferResult{
                make_letv(l.var, l.rhs, body->term),
                make_ann(live, {with_root(body->ann, body_live)}), live};
          },
          [&](const Term::Cond& c) -> Out {
            auto t = infer_rec(lam, scope, *c.then_branch);
            if (!t) return std::nullopt;
            auto e = infer_rec(lam, scope, *c.else_branch);
            if (!e) return std::nullopt;
            VarSet live = free_vars(*c.guard).unioned(t->live).unioned(e->live);
            return InferResult{make_cond(c.guard, t->term, e->term),
                               make_ann(live, {t->ann, e->ann}), live};
          },
          [&](const Term::LetFun& f) -> Out {
            VarSet params = param_set(f.params);
            VarSet body_scope = scope.unioned(params);
            // Globals fixpoint: grow from the body's free variables until the
            // body's inferred live set settles.
            VarSet globals = free_vars(*f.body).minus(f.params).intersect(scope);
            size_t cap = occ_vars(s).size() + scope.size() + 2;
            std::optional<InferResult> body;
            for (size_t iter = 0; iter <= cap; ++iter) {
              body = infer_rec(lam.pushed(f.fn, globals), body_scope, *f.body);
              if (!body) return std::nullopt;
              VarSet next = globals.unioned(body->live.minus(f.params));
              if (next == globals) break;
              globals = std::move(next);
              body.reset();
            }
            if (!body) return std::nullopt;
            GlobalsCtx inner = lam.pushed(f.fn, globals);
            VarSet body_live = globals.unioned(params);
            auto cont = infer_rec(inner, scope, *f.cont);
            if (!cont) return std::nullopt;
            return InferResult{
                make_letfun(f.fn, f.params, globals, body->term, cont->term),
                make_ann(cont->live,
                         {with_root(body->ann, body_live), cont->ann}),
                cont->live};
          },
      },
      s.node);
}

}  // namespace

std::optional<LiveResult> live_infer(const TermPtr& s) {
  if (!params_wellformed(*s)) return std::nullopt;
  auto r = infer_rec({}, free_vars(*s), *s);
  if (!r) return std::nullopt;
  return LiveResult{r->term, r->ann, r->live};
}

bool live_ctx_check(const Ctx<Block>& blocks, const GlobalsCtx& lam) {
  if (blocks.size() != lam.size()) return false;
  if (blocks.empty()) return true;
  size_t last = blocks.size() - 1;
  const auto& block_entry = blocks[last];
  const auto& lam_entry = lam[last];
  if (block_entry.name != lam_entry.name) return false;
  if (!block_entry.value.has_value() || !lam_entry.value.has_value())
    return false;
  const Block& block = *block_entry.value;
  const VarSet& globals = *lam_entry.value;
  VarSet params = param_set(block.params);
  if (!globals.disjoint(params)) return false;
  GlobalsCtx inner = lam.prefix(last).pushed(lam_entry.name, globals);
  auto ann = live_annotate(inner, *block.body);
  if (!ann) return false;
  VarSet root = globals.unioned(params);
  if (!ann->second.subset_of(root)) return false;
  if (!live_check(inner, root, *block.body, *with_root(ann->first, root)))
    return false;
  return live_ctx_check(blocks.prefix(last), lam.prefix(last));
}

size_t max_live(const Ann& a) {
  size_t best = a.live.size();
  for (const auto& c : a.children) best = std::max(best, max_live(*c));
  return best;
}

bool globals_within(const GlobalsCtx& lam, const VarSet& allowed) {
  for (const auto& e : lam)
    if (e.value.has_value() && !e.value->subset_of(allowed)) return false;
  return true;
}

bool ann_within_scope(const Term& s, const Ann& a, const VarSet& allowed) {
  if (!a.live.subset_of(allowed)) return false;
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return true; },
          [&](const Term::App&) { return true; },
          [&](const Term::LetVal& l) {
            VarSet inner = allowed;
            inner.insert(l.var);
            return ann_within_scope(*l.body, *a.children[0], inner);
          },
          [&](const Term::Cond& c) {
            return ann_within_scope(*c.then_branch, *a.children[0], allowed) &&
                   ann_within_scope(*c.else_branch, *a.children[1], allowed);
          },
          [&](const Term::LetFun& f) {
            VarSet inner = allowed.unioned(param_set(f.params));
            return ann_within_scope(*f.body, *a.children[0], inner) &&
                   ann_within_scope(*f.cont, *a.children[1], allowed);
          },
      },
      s.node);
}

AnnPtr shape_ann(const Term& s) {
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return make_ann({}); },
          [&](const Term::App&) { return make_ann({}); },
          [&](const Term::LetVal& l) {
            return make_ann({}, {shape_ann(*l.body)});
          },
          [&](const Term::Cond& c) {
            return make_ann({}, {shape_ann(*c.then_branch),
                                 shape_ann(*c.else_branch)});
          },
          [&](const Term::LetFun& f) {
            return make_ann({}, {shape_ann(*f.body), shape_ann(*f.cont)});
          },
      },
      s.node);
}

}  // namespace il
