#include "il/fuzz.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <thread>

#include "il/alpha.hpp"
#include "il/coherence.hpp"
#include "il/pipeline.hpp"
#include "il/print.hpp"
#include "il/util.hpp"

namespace il {

std::optional<FuzzCheck> parse_fuzz_check(std::string_view name) {
  if (name == "invariance") return FuzzCheck::Invariance;
  if (name == "rassign") return FuzzCheck::Rassign;
  if (name == "alpha") return FuzzCheck::Alpha;
  if (name == "apart") return FuzzCheck::Apart;
  if (name == "oracle-agreement") return FuzzCheck::OracleAgreement;
  return std::nullopt;
}

std::string_view fuzz_check_name(FuzzCheck check) {
  switch (check) {
    case FuzzCheck::Invariance: return "invariance";
    case FuzzCheck::Rassign: return "rassign";
    case FuzzCheck::Alpha: return "alpha";
    case FuzzCheck::Apart: return "apart";
    case FuzzCheck::OracleAgreement: return "oracle-agreement";
  }
  return "?";
}

namespace {

Env random_env(const VarSet& vars, uint64_t seed) {
  SplitMix64 rng(seed ^ 0x7f4a7c15ca62a1d3ULL);
  Env env;
  for (Var v : vars)
    env = env.with(v, static_cast<Value>(rng.below(9)) - 4);
  return env;
}

std::optional<std::string> check_invariance(const TermPtr& program,
                                            uint64_t seed,
                                            const FuzzOptions& options,
                                            bool* applicable) {
  auto live = live_infer(program);
  if (!live) return std::nullopt;  // premise unavailable
  if (!coh_check({}, *live->term, *live->ann)) return std::nullopt;
  if (applicable != nullptr) *applicable = true;
  Env env = random_env(free_vars(*program), seed);
  EquivVerdict verdict =
      invariance_check(live->term, env, options.fuel, options.domain);
  if (verdict.inequivalent())
    return "coherent program inequivalent F vs I: " + to_string(*verdict.witness);
  return std::nullopt;
}

std::optional<std::string> check_rassign(const TermPtr& program, uint64_t seed,
                                         const FuzzOptions& options,
                                         bool* applicable) {
  if (applicable != nullptr) *applicable = true;
  PipelineReport report = compile(program);
  if (!report.ok) {
    for (const auto& stage : report.stages)
      if (!stage.ok) return "stage " + stage.stage + ": " + stage.detail;
    return "pipeline failed";
  }
  size_t inputs = free_vars(*program).size();
  if (report.names_used > std::max(inputs, report.max_live))
    return "name bound exceeded: " + std::to_string(report.names_used) +
           " > max(" + std::to_string(inputs) + ", " +
           std::to_string(report.max_live) + ")";
  Env env = random_env(free_vars(*program), seed);
  // The output reads renamed inputs; bind their images to the same values.
  Env out_env;
  for (Var v : free_vars(*program)) {
    auto val = env.get(v);
    if (val) out_env = out_env.with(report.assignment(v), *val);
  }
  EquivVerdict verdict =
      bisim(f_config({}, env, program), i_config({}, out_env, report.output),
            options.fuel, options.domain);
  if (verdict.inequivalent())
    return "translated program inequivalent: " + to_string(*verdict.witness);
  return std::nullopt;
}

std::optional<std::string> check_alpha(const TermPtr& program, uint64_t seed,
                                       const FuzzOptions& options,
                                       bool* applicable) {
  if (applicable != nullptr) *applicable = true;
  if (!alpha_check(*program, *program)) return "alpha not reflexive";
  auto apart1 = rename_apart({}, free_vars(*program), *program);
  if (!apart1) return "rename apart rejected its own precondition";
  if (!alpha_check(*program, *apart1->term)) return "alpha(input, variant) failed";
  if (!alpha_check(*apart1->term, *program)) return "alpha not symmetric";
  auto apart2 = rename_apart({}, free_vars(*apart1->term), *apart1->term);
  if (!apart2) return "second rename apart failed";
  if (!alpha_check(*program, *apart2->term)) return "alpha not transitive";
  Env env = random_env(free_vars(*program), seed);
  EquivVerdict verdict =
      bisim(f_config({}, env, program), f_config({}, env, apart1->term),
            options.fuel, options.domain);
  if (verdict.inequivalent())
    return "alpha-related programs inequivalent: " + to_string(*verdict.witness);
  return std::nullopt;
}

std::optional<std::string> check_apart(const TermPtr& program, uint64_t,
                                       const FuzzOptions&, bool* applicable) {
  if (applicable != nullptr) *applicable = true;
  VarSet scope = free_vars(*program);
  auto result = rename_apart({}, scope, *program);
  if (!result) return "rename apart rejected its own precondition";
  auto binders = apart_check(scope, *result->term);
  if (!binders) return "output fails the renamed-apart decision procedure";
  if (!(*binders == result->new_binders))
    return "reported binder set differs from the decision procedure's";
  if (!scope.disjoint(result->new_binders))
    return "new binders overlap the input scope";
  if (!alpha_check(*program, *result->term))
    return "output is not alpha-equivalent to the input";
  return std::nullopt;
}

std::optional<std::string> check_oracle_agreement(const TermPtr& program,
                                                  uint64_t seed,
                                                  const FuzzOptions& options,
                                                  bool* applicable) {
  if (applicable != nullptr) *applicable = true;
  TermPtr other;
  switch (seed % 3) {
    case 0: other = program; break;
    case 1: {
      auto apart = rename_apart({}, free_vars(*program), *program);
      other = apart ? apart->term : program;
      break;
    }
    default: other = mutate_program(program, seed); break;
  }
  Env env = random_env(free_vars(*program).unioned(free_vars(*other)), seed);
  Configuration lhs = f_config({}, env, program);
  Configuration rhs = f_config({}, env, other);
  EquivVerdict by_traces = trace_equiv(lhs, rhs, options.fuel, options.domain);
  EquivVerdict by_bisim = bisim(lhs, rhs, options.fuel, options.domain);
  bool contradiction =
      (by_traces.equivalent() && by_bisim.inequivalent()) ||
      (by_traces.inequivalent() && by_bisim.equivalent());
  if (contradiction)
    return std::string("oracles contradict: traces say ") +
           (by_traces.equivalent() ? "equivalent" : "inequivalent") +
           ", bisimulation says the opposite";
  return std::nullopt;
}

}  // namespace

std::optional<std::string> fuzz_trial(FuzzCheck check, const TermPtr& program,
                                      uint64_t seed, const FuzzOptions& options,
                                      bool* applicable) {
  bool dummy = false;
  bool* flag = applicable != nullptr ? applicable : &dummy;
  *flag = false;
  switch (check) {
    case FuzzCheck::Invariance:
      return check_invariance(program, seed, options, flag);
    case FuzzCheck::Rassign:
      return check_rassign(program, seed, options, flag);
    case FuzzCheck::Alpha:
      return check_alpha(program, seed, options, flag);
    case FuzzCheck::Apart:
      return check_apart(program, seed, options, flag);
    case FuzzCheck::OracleAgreement:
      return check_oracle_agreement(program, seed, options, flag);
  }
  return std::nullopt;
}

namespace {

void collect_candidates(const TermPtr& s, std::vector<TermPtr>& out);

// Replaces applications of `fn` by a constant return, so the definition can
// be dropped without leaving dangling calls.
TermPtr drop_calls(Label fn, const Term& s) {
  return std::visit(
      overloaded{
          [&](const Term::Ret&) { return std::make_shared<const Term>(s); },
          [&](const Term::App& a) {
            if (a.fn == fn) return make_ret(lit(0));
            return std::make_shared<const Term>(s);
          },
          [&](const Term::LetVal& l) {
            return make_letv(l.var, l.rhs, drop_calls(fn, *l.body));
          },
          [&](const Term::Cond& c) {
            return make_cond(c.guard, drop_calls(fn, *c.then_branch),
                             drop_calls(fn, *c.else_branch));
          },
          [&](const Term::LetFun& f) {
            if (f.fn == fn) return std::make_shared<const Term>(s);
            return make_letfun(f.fn, f.params, f.globals,
                               drop_calls(fn, *f.body),
                               drop_calls(fn, *f.cont));
          },
      },
      s.node);
}

template <typename Rebuild>
void child_candidates(const TermPtr& child, Rebuild rebuild,
                      std::vector<TermPtr>& out) {
  std::vector<TermPtr> inner;
  collect_candidates(child, inner);
  for (const auto& variant : inner) out.push_back(rebuild(variant));
}

void collect_candidates(const TermPtr& s, std::vector<TermPtr>& out) {
  std::visit(
      overloaded{
          [&](const Term::Ret& r) {
            if (!std::holds_alternative<Expr::Lit>(r.expr->node))
              out.push_back(make_ret(lit(0)));
          },
          [&](const Term::App&) { out.push_back(make_ret(lit(0))); },
          [&](const Term::LetVal& l) {
            if (!free_vars(*l.body).contains(l.var)) out.push_back(l.body);
            if (!l.rhs.is_expr() ||
                !std::holds_alternative<Expr::Lit>(l.rhs.expr()->node))
              out.push_back(make_letv(l.var, ext(lit(0)), l.body));
            child_candidates(l.body, [&](const TermPtr& b) {
              return make_letv(l.var, l.rhs, b);
            }, out);
          },
          [&](const Term::Cond& c) {
            out.push_back(c.then_branch);
            out.push_back(c.else_branch);
            child_candidates(c.then_branch, [&](const TermPtr& t) {
              return make_cond(c.guard, t, c.else_branch);
            }, out);
            child_candidates(c.else_branch, [&](const TermPtr& e) {
              return make_cond(c.guard, c.then_branch, e);
            }, out);
          },
          [&](const Term::LetFun& f) {
            out.push_back(drop_calls(f.fn, *f.cont));
            child_candidates(f.body, [&](const TermPtr& b) {
              return make_letfun(f.fn, f.params, f.globals, b, f.cont);
            }, out);
            child_candidates(f.cont, [&](const TermPtr& c) {
              return make_letfun(f.fn, f.params, f.globals, f.body, c);
            }, out);
          },
      },
      s->node);
}

}  // namespace

TermPtr shrink_failure(FuzzCheck check, const TermPtr& program, uint64_t seed,
                       const FuzzOptions& options) {
  TermPtr current = program;
  size_t budget = 300;
  bool progressed = true;
  while (progressed && budget > 0) {
    progressed = false;
    std::vector<TermPtr> candidates;
    collect_candidates(current, candidates);
    for (const auto& candidate : candidates) {
      if (budget == 0) break;
      --budget;
      if (fuzz_trial(check, candidate, seed, options).has_value()) {
        current = candidate;
        progressed = true;
        break;
      }
    }
  }
  return current;
}

FuzzReport run_fuzz(FuzzCheck check, const FuzzOptions& options) {
  FuzzReport report;
  report.check = check;
  report.seeds_run = options.seeds;

  unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::vector<FuzzFailure>> failures(jobs);
  std::vector<size_t> applicable_counts(jobs, 0);

  auto worker = [&](unsigned worker_index) {
    for (size_t trial = worker_index; trial < options.seeds; trial += jobs) {
      GenConfig gen = options.gen;
      gen.seed = options.gen.seed + trial;
      TermPtr program = gen_program(gen);
      bool applicable = false;
      auto failure = fuzz_trial(check, program, gen.seed, options, &applicable);
      if (applicable) ++applicable_counts[worker_index];
      if (failure) {
        TermPtr minimized = shrink_failure(check, program, gen.seed, options);
        failures[worker_index].push_back({gen.seed, *failure, minimized});
      }
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (unsigned i = 0; i < jobs; ++i) threads.emplace_back(worker, i);
    for (auto& t : threads) t.join();
  }

  for (unsigned i = 0; i < jobs; ++i) {
    report.applicable += applicable_counts[i];
    for (auto& f : failures[i]) report.failures.push_back(std::move(f));
  }
  std::sort(report.failures.begin(), report.failures.end(),
            [](const FuzzFailure& a, const FuzzFailure& b) {
              return a.seed < b.seed;
            });

  if (!options.corpus_dir.empty() && !report.failures.empty()) {
    std::filesystem::create_directories(options.corpus_dir);
    for (const auto& failure : report.failures) {
      std::string path = options.corpus_dir + "/fail-" +
                         std::string(fuzz_check_name(check)) + "-" +
                         std::to_string(failure.seed) + ".il";
      std::ofstream out(path);
      out << "// " << failure.detail << "\n" << print(failure.program);
    }
  }
  return report;
}

}  // namespace il
