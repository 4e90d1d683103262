#include "il/generator.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "il/util.hpp"

namespace il {

namespace {

constexpr std::array<const char*, 8> kVarNames = {"a", "b", "c", "d",
                                                  "e", "u", "w", "z"};
constexpr std::array<const char*, 6> kLabelNames = {"f", "g", "h",
                                                    "p", "q", "r"};
constexpr std::array<const char*, 4> kActionNames = {"A", "B", "C", "D"};
constexpr std::array<const char*, 4> kFreeNames = {"in_a", "in_b", "in_c",
                                                   "in_d"};

struct LabelInfo {
  Label fn;
  size_t arity;
};

struct Gen {
  SplitMix64 rng;
  std::vector<Var> binder_pool;
  std::vector<Action> actions;
  std::vector<Label> label_pool;
  double extern_prob;

  ExprPtr gen_expr(const std::vector<Var>& scope, int depth) {
    if (depth > 0 && rng.chance(0.45)) {
      auto op = static_cast<BinOp>(rng.below(8));
      return bin(op, gen_expr(scope, depth - 1), gen_expr(scope, depth - 1));
    }
    if (!scope.empty() && rng.chance(0.65))
      return ref(scope[rng.below(scope.size())]);
    return lit(static_cast<Value>(rng.below(9)) - 3);
  }

  std::vector<ExprPtr> gen_args(const std::vector<Var>& scope, size_t arity) {
    std::vector<ExprPtr> out;
    out.reserve(arity);
    for (size_t i = 0; i < arity; ++i) out.push_back(gen_expr(scope, 1));
    return out;
  }

  TermPtr discharge(const std::vector<Var>& scope,
                    std::span<const LabelInfo> obligations) {
    TermPtr head = make_app(obligations.front().fn,
                            gen_args(scope, obligations.front().arity));
    if (obligations.size() == 1) return head;
    return make_cond(gen_expr(scope, 1), head,
                     discharge(scope, obligations.subspan(1)));
  }

  TermPtr gen_term(int depth, std::vector<Var> scope,
                   std::vector<LabelInfo> labels,
                   std::vector<LabelInfo> obligations) {
    if (!obligations.empty() && (depth <= 0 || rng.chance(0.30)))
      return discharge(scope, obligations);
    if (depth <= 0) {
      if (!labels.empty() && rng.chance(0.2)) {
        const LabelInfo& callee = labels[rng.below(labels.size())];
        return make_app(callee.fn, gen_args(scope, callee.arity));
      }
      return make_ret(gen_expr(scope, 1));
    }

    uint64_t roll = rng.below(100);
    bool may_end = obligations.empty();
    if (roll < 38) {  // variable binding
      Var x = binder_pool[rng.below(binder_pool.size())];
      ExtExpr rhs = rng.chance(extern_prob)
                        ? ext(actions[rng.below(actions.size())])
                        : ext(gen_expr(scope, 2));
      std::vector<Var> inner = scope;
      if (std::find(inner.begin(), inner.end(), x) == inner.end())
        inner.push_back(x);
      return make_letv(x, rhs,
                       gen_term(depth - 1, std::move(inner), std::move(labels),
                                std::move(obligations)));
    }
    if (roll < 62) {  // conditional; split obligations across branches
      std::vector<LabelInfo> left, right;
      for (const LabelInfo& o : obligations)
        (rng.chance(0.5) ? left : right).push_back(o);
      ExprPtr guard = gen_expr(scope, 2);
      TermPtr t = gen_term(depth - 1, scope, labels, std::move(left));
      TermPtr e = gen_term(depth - 1, scope, labels, std::move(right));
      return make_cond(guard, t, e);
    }
    if (roll < 85) {  // function definition
      std::vector<Label> available;
      for (Label candidate : label_pool) {
        bool used = false;
        for (const LabelInfo& l : labels) used = used || l.fn == candidate;
        if (!used) available.push_back(candidate);
      }
      if (!available.empty()) {
        Label fn = available[rng.below(available.size())];
        size_t arity = rng.below(3);
        std::vector<Var> params;
        for (size_t i = 0; i < arity && i < binder_pool.size(); ++i) {
          Var p = binder_pool[rng.below(binder_pool.size())];
          if (std::find(params.begin(), params.end(), p) == params.end())
            params.push_back(p);
        }
        std::vector<Var> body_scope = scope;
        for (Var p : params)
          if (std::find(body_scope.begin(), body_scope.end(), p) ==
              body_scope.end())
            body_scope.push_back(p);
        std::vector<LabelInfo> body_labels = labels;
        body_labels.push_back({fn, params.size()});
        // Sometimes force a recursive call to exercise loops.
        std::vector<LabelInfo> body_obligations;
        if (rng.chance(0.4)) body_obligations.push_back({fn, params.size()});
        TermPtr body = gen_term(depth - 1, std::move(body_scope), body_labels,
                                std::move(body_obligations));
        std::vector<LabelInfo> cont_labels = std::move(body_labels);
        std::vector<LabelInfo> cont_obligations = std::move(obligations);
        cont_obligations.push_back({fn, params.size()});
        return make_letfun(fn, std::move(params), std::nullopt, body,
                           gen_term(depth - 1, scope, std::move(cont_labels),
                                    std::move(cont_obligations)));
      }
      // fall through to a binding when the label pool is exhausted
      Var x = binder_pool[rng.below(binder_pool.size())];
      std::vector<Var> inner = scope;
      if (std::find(inner.begin(), inner.end(), x) == inner.end())
        inner.push_back(x);
      return make_letv(x, ext(gen_expr(scope, 2)),
                       gen_term(depth - 1, std::move(inner), std::move(labels),
                                std::move(obligations)));
    }
    if (roll < 90 && may_end && !labels.empty()) {
      const LabelInfo& callee = labels[rng.below(labels.size())];
      return make_app(callee.fn, gen_args(scope, callee.arity));
    }
    if (may_end) return make_ret(gen_expr(scope, 2));
    return gen_term(depth - 1, std::move(scope), std::move(labels),
                    std::move(obligations));
  }
};

}  // namespace

VarSet gen_free_pool(const GenConfig& config) {
  VarSet out;
  int n = std::clamp<int>(config.free_vars, 0,
                          static_cast<int>(kFreeNames.size()));
  for (int i = 0; i < n; ++i) out.insert(var(kFreeNames[i]));
  return out;
}

TermPtr gen_program(const GenConfig& config) {
  Gen gen{SplitMix64{config.seed ^ 0x51ed2701a2b5f3e6ULL}, {}, {}, {},
          config.extern_prob};
  int vars =
      std::clamp<int>(config.var_pool, 1, static_cast<int>(kVarNames.size()));
  for (int i = 0; i < vars; ++i) gen.binder_pool.push_back(var(kVarNames[i]));
  int labels = std::clamp<int>(config.label_pool, 0,
                               static_cast<int>(kLabelNames.size()));
  for (int i = 0; i < labels; ++i)
    gen.label_pool.push_back(label(kLabelNames[i]));
  int actions = std::clamp<int>(config.action_pool, 1,
                                static_cast<int>(kActionNames.size()));
  for (int i = 0; i < actions; ++i)
    gen.actions.push_back(action(kActionNames[i]));

  std::vector<Var> scope;
  for (Var v : gen_free_pool(config)) scope.push_back(v);
  return gen.gen_term(config.max_depth, std::move(scope), {}, {});
}

namespace {

// Rebuilds the term, applying one mutation when the countdown hits zero.
struct Mutator {
  SplitMix64 rng;
  int64_t countdown;
  bool done = false;

  ExprPtr visit_expr(const ExprPtr& e) {
    if (!done && countdown-- == 0) {
      done = true;
      return std::visit(
          overloaded{
              [&](const Expr::Lit& l) { return lit(l.value + 1); },
              [&](const Expr::Ref&) { return lit(1); },
              [&](const Expr::Bin& b) {
                auto op = b.op == BinOp::Add ? BinOp::Mul : BinOp::Add;
                return bin(op, b.lhs, b.rhs);
              },
          },
          e->node);
    }
    if (const auto* b = std::get_if<Expr::Bin>(&e->node))
      return bin(b->op, visit_expr(b->lhs), visit_expr(b->rhs));
    return e;
  }

  TermPtr visit(const TermPtr& s) {
    return std::visit(
        overloaded{
            [&](const Term::Ret& r) { return make_ret(visit_expr(r.expr)); },
            [&](const Term::App& a) {
              std::vector<ExprPtr> args;
              for (const auto& e : a.args) args.push_back(visit_expr(e));
              return make_app(a.fn, std::move(args));
            },
            [&](const Term::LetVal& l) {
              ExtExpr rhs = l.rhs.is_expr() ? ext(visit_expr(l.rhs.expr()))
                                            : l.rhs;
              return make_letv(l.var, rhs, visit(l.body));
            },
            [&](const Term::Cond& c) {
              if (!done && countdown-- == 0) {
                done = true;
                return make_cond(c.guard, c.else_branch, c.then_branch);
              }
              return make_cond(visit_expr(c.guard), visit(c.then_branch),
                               visit(c.else_branch));
            },
            [&](const Term::LetFun& f) {
              return make_letfun(f.fn, f.params, f.globals, visit(f.body),
                                 visit(f.cont));
            },
        },
        s->node);
  }
};

}  // namespace

TermPtr mutate_program(const TermPtr& s, uint64_t seed) {
  SplitMix64 rng(seed ^ 0xc3a5c85c97cb3127ULL);
  size_t size = term_size(*s);
  Mutator mutator{rng, static_cast<int64_t>(rng.below(size * 2)), false};
  TermPtr out = mutator.visit(s);
  if (!mutator.done) {
    Mutator again{rng, 0, false};
    out = again.visit(s);
  }
  return out;
}

}  // namespace il
