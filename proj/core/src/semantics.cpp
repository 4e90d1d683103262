#include "il/semantics.hpp"

#include "il/util.hpp"

namespace il {

Configuration f_config(Ctx<Closure> funcs, Env env, TermPtr term) {
  return FConfig{std::move(funcs), std::move(env), std::move(term)};
}

Configuration i_config(Ctx<Block> blocks, Env env, TermPtr term) {
  return IConfig{std::move(blocks), std::move(env), std::move(term)};
}

const Env& config_env(const Configuration& c) {
  return std::visit([](const auto& cfg) -> const Env& { return cfg.env; }, c);
}

const TermPtr& config_term(const Configuration& c) {
  return std::visit([](const auto& cfg) -> const TermPtr& { return cfg.term; }, c);
}

size_t config_ctx_size(const Configuration& c) {
  return std::visit(overloaded{
                        [](const FConfig& f) { return f.funcs.size(); },
                        [](const IConfig& i) { return i.blocks.size(); },
                    },
                    c);
}

namespace {

template <typename Cfg>
StepOutcome step_common(const Cfg& cfg) {
  const Term& t = *cfg.term;
  if (const auto* l = std::get_if<Term::LetVal>(&t.node)) {
    if (!l->rhs.is_expr()) return StepExternal{l->rhs.act(), l->var, l->body};
    auto v = eval_expr(*l->rhs.expr(), cfg.env);
    if (!v) return StepTerminal{};
    Cfg next = cfg;
    next.env = cfg.env.with(l->var, *v);
    next.term = l->body;
    return StepSilent{next};
  }
  if (const auto* c = std::get_if<Term::Cond>(&t.node)) {
    auto v = eval_expr(*c->guard, cfg.env);
    if (!v) return StepTerminal{};
    Cfg next = cfg;
    next.term = beta(*v) == 1 ? c->then_branch : c->else_branch;
    return StepSilent{next};
  }
  return StepTerminal{};
}

}  // namespace

StepOutcome classify(const Configuration& c) {
  return std::visit(
      overloaded{
          [&](const FConfig& cfg) -> StepOutcome {
            const Term& t = *cfg.term;
            if (const auto* f = std::get_if<Term::LetFun>(&t.node)) {
              FConfig next = cfg;
              next.funcs =
                  cfg.funcs.pushed(f->fn, Closure{cfg.env, f->params, f->body});
              next.term = f->cont;
              return StepSilent{next};
            }
            if (const auto* a = std::get_if<Term::App>(&t.node)) {
              auto vals = eval_expr_list(a->args, cfg.env);
              if (!vals) return StepTerminal{};
              auto closure = cfg.funcs.lookup(a->fn);
              if (!closure) return StepTerminal{};
              if (closure->params.size() != vals->size()) return StepTerminal{};
              auto rewound = cfg.funcs.rewind(a->fn);
              FConfig next;
              next.funcs = *rewound;
              // The callee runs in its definition-time environment.
              next.env = closure->env.with_all(closure->params, *vals);
              next.term = closure->body;
              return StepSilent{next};
            }
            return step_common(cfg);
          },
          [&](const IConfig& cfg) -> StepOutcome {
            const Term& t = *cfg.term;
            if (const auto* f = std::get_if<Term::LetFun>(&t.node)) {
              IConfig next = cfg;
              next.blocks = cfg.blocks.pushed(f->fn, Block{f->params, f->body});
              next.term = f->cont;
              return StepSilent{next};
            }
            if (const auto* a = std::get_if<Term::App>(&t.node)) {
              auto vals = eval_expr_list(a->args, cfg.env);
              if (!vals) return StepTerminal{};
              auto block = cfg.blocks.lookup(a->fn);
              if (!block) return StepTerminal{};
              if (block->params.size() != vals->size()) return StepTerminal{};
              auto rewound = cfg.blocks.rewind(a->fn);
              IConfig next;
              next.blocks = *rewound;
              // Parallel assignment into the caller-visible environment.
              next.env = cfg.env.with_all(block->params, *vals);
              next.term = block->body;
              return StepSilent{next};
            }
            return step_common(cfg);
          },
      },
      c);
}

Configuration resume_external(const Configuration& c, const StepExternal& ext,
                              Value v) {
  return std::visit(
      overloaded{
          [&](const FConfig& cfg) -> Configuration {
            return FConfig{cfg.funcs, cfg.env.with(ext.binder, v), ext.cont};
          },
          [&](const IConfig& cfg) -> Configuration {
            return IConfig{cfg.blocks, cfg.env.with(ext.binder, v), ext.cont};
          },
      },
      c);
}

std::vector<std::pair<Event, Configuration>> successors(
    const Configuration& c, std::span<const Value> domain) {
  std::vector<std::pair<Event, Configuration>> out;
  StepOutcome outcome = classify(c);
  std::visit(overloaded{
                 [&](const StepSilent& s) {
                   out.emplace_back(Event::tau(), s.next);
                 },
                 [&](const StepExternal& e) {
                   for (Value v : domain)
                     out.emplace_back(Event::external(v, e.act),
                                      resume_external(c, e, v));
                 },
                 [](const StepTerminal&) {},
             },
             outcome);
  return out;
}

std::optional<Value> res(const Configuration& c) {
  const Term& t = *config_term(c);
  if (const auto* r = std::get_if<Term::Ret>(&t.node))
    return eval_expr(*r->expr, config_env(c));
  return std::nullopt;
}

Value SeededOracle::choose(Action, size_t) {
  state_ += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return static_cast<Value>(z & 1);
}

RunResult run(Configuration c, size_t fuel, ExternOracle& oracle) {
  RunResult result{c, std::nullopt, 0, false, {}};
  size_t externals = 0;
  for (size_t step = 0; step < fuel; ++step) {
    StepOutcome outcome = classify(result.final_config);
    if (std::holds_alternative<StepTerminal>(outcome)) {
      result.result = res(result.final_config);
      return result;
    }
    if (const auto* e = std::get_if<StepExternal>(&outcome)) {
      Value v = oracle.choose(e->act, externals++);
      result.events.push_back({v, e->act});
      result.final_config = resume_external(result.final_config, *e, v);
    } else {
      result.final_config = std::get<StepSilent>(outcome).next;
    }
    ++result.steps;
  }
  if (std::holds_alternative<StepTerminal>(classify(result.final_config))) {
    result.result = res(result.final_config);
  } else {
    result.fuel_exhausted = true;
  }
  return result;
}

Ctx<Block> strip(const Ctx<Closure>& funcs) {
  Ctx<Block> out;
  for (const auto& e : funcs) {
    if (e.value.has_value())
      out.push(e.name, Block{e.value->params, e.value->body});
    else
      out.push(e.name, std::nullopt);
  }
  return out;
}

}  // namespace il
