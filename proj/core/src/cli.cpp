#include "il/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "il/alpha.hpp"
#include "il/coherence.hpp"
#include "il/fuzz.hpp"
#include "il/parse.hpp"
#include "il/pipeline.hpp"
#include "il/print.hpp"
#include "il/util.hpp"

namespace il::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUnknown = 2;
constexpr int kUsage = 3;

struct Loaded {
  ParseResult parsed;
  std::string file;
};

std::optional<Loaded> load(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << file << ": cannot open\n";
    return std::nullopt;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  ParseResult parsed = parse(buffer.str());
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics)
      std::cerr << format_diagnostic(file, d) << "\n";
    return std::nullopt;
  }
  return Loaded{std::move(parsed), file};
}

std::optional<Env> parse_env(const std::vector<std::string>& bindings) {
  Env env;
  for (const auto& binding : bindings) {
    size_t eq = binding.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "bad --env binding '" << binding << "' (want x=v)\n";
      return std::nullopt;
    }
    try {
      env = env.with(var(binding.substr(0, eq)),
                     static_cast<Value>(std::stoll(binding.substr(eq + 1))));
    } catch (const std::exception&) {
      std::cerr << "bad --env value in '" << binding << "'\n";
      return std::nullopt;
    }
  }
  return env;
}

std::optional<std::vector<Value>> parse_values(const std::string& list) {
  std::vector<Value> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(static_cast<Value>(std::stoll(item)));
    } catch (const std::exception&) {
      std::cerr << "bad value '" << item << "'\n";
      return std::nullopt;
    }
  }
  return out;
}

// Fills globals and a full annotation unless the source already carries
// both.
bool globals_complete(const Term& s) {
  return std::visit(
      overloaded{
          [](const Term::Ret&) { return true; },
          [](const Term::App&) { return true; },
          [](const Term::LetVal& l) { return globals_complete(*l.body); },
          [](const Term::Cond& c) {
            return globals_complete(*c.then_branch) &&
                   globals_complete(*c.else_branch);
          },
          [](const Term::LetFun& f) {
            return f.globals.has_value() && globals_complete(*f.body) &&
                   globals_complete(*f.cont);
          },
      },
      s.node);
}

struct Annotated {
  TermPtr term;
  AnnPtr ann;
};

std::optional<Annotated> ensure_annotated(const Loaded& input) {
  if (input.parsed.ann && globals_complete(*input.parsed.term))
    return Annotated{input.parsed.term, input.parsed.ann};
  if (globals_complete(*input.parsed.term)) {
    auto ann = live_annotate({}, *input.parsed.term);
    if (ann) return Annotated{input.parsed.term, ann->first};
  }
  auto inferred = live_infer(input.parsed.term);
  if (!inferred) {
    std::cerr << input.file << ": liveness inference failed\n";
    return std::nullopt;
  }
  return Annotated{inferred->term, inferred->ann};
}

int verdict_exit(const EquivVerdict& verdict) {
  switch (verdict.verdict) {
    case Verdict::Equivalent: std::cout << "equivalent\n"; return kOk;
    case Verdict::Inequivalent:
      std::cout << "inequivalent";
      if (verdict.witness)
        std::cout << " (side " << verdict.witness_side
                  << " trace: " << to_string(*verdict.witness) << ")";
      std::cout << "\n";
      return kNegative;
    case Verdict::Unknown: std::cout << "unknown\n"; return kUnknown;
  }
  return kUnknown;
}

Configuration make_side(const TermPtr& term, const Env& env, bool imperative) {
  if (imperative) return i_config({}, env, term);
  return f_config({}, env, term);
}

void emit_output(const std::string& text, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_file);
    out << text;
  }
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"IL toolkit: parse, run, compare and translate IL programs"};
  app.require_subcommand(1);

  std::string file, file2, out_file, domain_text = "0,1";
  std::vector<std::string> env_bindings;
  size_t fuel = 256;
  size_t eval_fuel = 100000;
  std::string extern_script;
  std::optional<uint64_t> extern_seed;
  std::string lhs_mode = "f", rhs_mode = "i";
  bool json_output = false;
  bool prune = false;

  auto add_eval_flags = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "program file")->required();
    cmd->add_option("--env", env_bindings, "initial binding x=v (repeatable)");
    cmd->add_option("--fuel", eval_fuel, "step budget");
    cmd->add_option("--extern-script", extern_script,
                    "comma-separated system call results");
    cmd->add_option("--extern-seed", extern_seed,
                    "seeded random system call results");
  };

  auto* cmd_parse = app.add_subcommand("parse", "parse and report diagnostics");
  cmd_parse->add_option("file", file, "program file")->required();

  auto* cmd_print = app.add_subcommand("print", "parse and pretty-print");
  cmd_print->add_option("file", file, "program file")->required();

  auto* cmd_eval_f = app.add_subcommand("eval-f", "run under the functional semantics");
  add_eval_flags(cmd_eval_f);
  auto* cmd_eval_i = app.add_subcommand("eval-i", "run under the imperative semantics");
  add_eval_flags(cmd_eval_i);

  auto* cmd_traces = app.add_subcommand("traces", "enumerate partial traces");
  cmd_traces->add_option("file", file)->required();
  cmd_traces->add_option("--env", env_bindings);
  cmd_traces->add_option("--fuel", fuel);
  cmd_traces->add_option("--domain", domain_text, "system call result domain");

  auto add_pair_flags = [&](CLI::App* cmd) {
    cmd->add_option("lhs", file)->required();
    cmd->add_option("rhs", file2)->required();
    cmd->add_option("--env", env_bindings);
    cmd->add_option("--fuel", fuel);
    cmd->add_option("--domain", domain_text);
    cmd->add_option("--lhs-sem", lhs_mode, "f or i")
        ->check(CLI::IsMember({"f", "i"}));
    cmd->add_option("--rhs-sem", rhs_mode, "f or i")
        ->check(CLI::IsMember({"f", "i"}));
  };
  auto* cmd_equiv = app.add_subcommand("equiv", "bounded trace-set comparison");
  add_pair_flags(cmd_equiv);
  auto* cmd_bisim = app.add_subcommand("bisim", "bounded bisimulation check");
  add_pair_flags(cmd_bisim);

  auto* cmd_live = app.add_subcommand("live", "liveness");
  std::string live_mode;
  cmd_live->add_option("mode", live_mode, "infer or check")
      ->required()
      ->check(CLI::IsMember({"infer", "check"}));
  cmd_live->add_option("file", file)->required();

  auto* cmd_coh = app.add_subcommand("coh", "coherence check");
  cmd_coh->add_option("file", file)->required();

  auto* cmd_apart = app.add_subcommand("rename-apart", "make all binders distinct");
  cmd_apart->add_option("file", file)->required();
  cmd_apart->add_option("-o,--output", out_file, "output file");

  auto* cmd_alpha = app.add_subcommand("alpha-eq", "alpha-equivalence check");
  cmd_alpha->add_option("lhs", file)->required();
  cmd_alpha->add_option("rhs", file2)->required();

  auto* cmd_rassign = app.add_subcommand("rassign", "register assignment");
  cmd_rassign->add_option("file", file)->required();

  auto* cmd_compile = app.add_subcommand("compile", "full translation pipeline");
  cmd_compile->add_option("file", file)->required();
  cmd_compile->add_option("-o,--output", out_file);
  cmd_compile->add_flag("--json", json_output, "machine-readable report");
  cmd_compile->add_flag("--prune-unreachable", prune,
                        "drop never-applied function definitions first");

  auto* cmd_fuzz = app.add_subcommand("fuzz", "randomized property checking");
  size_t seeds = 1000;
  int depth = 6;
  std::string check_name = "invariance";
  unsigned jobs = 1;
  uint64_t base_seed = 1;
  std::string corpus;
  double extern_prob = 0.15;
  int var_pool = 6;
  int label_pool = 4;
  cmd_fuzz->add_option("--seeds", seeds, "number of generated programs");
  cmd_fuzz->add_option("--depth", depth, "generator depth");
  cmd_fuzz->add_option("--seed", base_seed, "base seed");
  cmd_fuzz->add_option("--extern-prob", extern_prob,
                       "system-call probability per binding");
  cmd_fuzz->add_option("--var-pool", var_pool, "binder name pool size");
  cmd_fuzz->add_option("--label-pool", label_pool, "function name pool size");
  cmd_fuzz->add_option("--check", check_name,
                       "invariance|rassign|alpha|apart|oracle-agreement");
  cmd_fuzz->add_option("--fuel", fuel);
  cmd_fuzz->add_option("--domain", domain_text);
  cmd_fuzz->add_option("--jobs", jobs, "parallel workers");
  cmd_fuzz->add_option("--corpus", corpus, "directory for minimized failures");
  cmd_fuzz->add_flag("--json", json_output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::stringstream message;
    int code = app.exit(e, message, message);
    std::cerr << message.str();
    return code == 0 ? kOk : kUsage;
  }

  auto domain = parse_values(domain_text);
  if (!domain || domain->empty()) return kUsage;
  auto env = parse_env(env_bindings);
  if (!env) return kUsage;

  if (cmd_parse->parsed()) {
    auto loaded = load(file);
    return loaded ? kOk : kUsage;
  }

  if (cmd_print->parsed()) {
    auto loaded = load(file);
    if (!loaded) return kUsage;
    std::cout << print(loaded->parsed.term, loaded->parsed.ann);
    return kOk;
  }

  if (cmd_eval_f->parsed() || cmd_eval_i->parsed()) {
    auto loaded = load(file);
    if (!loaded) return kUsage;
    std::unique_ptr<ExternOracle> oracle;
    if (!extern_script.empty()) {
      auto script = parse_values(extern_script);
      if (!script) return kUsage;
      oracle = std::make_unique<ScriptOracle>(*script);
    } else if (extern_seed) {
      oracle = std::make_unique<SeededOracle>(*extern_seed);
    } else {
      oracle = std::make_unique<FixedOracle>(0);
    }
    Configuration start =
        make_side(loaded->parsed.term, *env, cmd_eval_i->parsed());
    RunResult result = run(start, eval_fuel, *oracle);
    if (result.fuel_exhausted) {
      std::cout << "fuel exhausted after " << result.steps << " steps\n";
      return kUnknown;
    }
    if (result.result)
      std::cout << *result.result << "\n";
    else
      std::cout << "bot\n";
    return kOk;
  }

  if (cmd_traces->parsed()) {
    auto loaded = load(file);
    if (!loaded) return kUsage;
    TraceSet set = traces(f_config({}, *env, loaded->parsed.term), fuel, *domain);
    for (const auto& trace : set.items) std::cout << to_string(trace) << "\n";
    return kOk;
  }

  if (cmd_equiv->parsed() || cmd_bisim->parsed()) {
    auto lhs = load(file);
    if (!lhs) return kUsage;
    auto rhs = load(file2);
    if (!rhs) return kUsage;
    Configuration c1 = make_side(lhs->parsed.term, *env, lhs_mode == "i");
    Configuration c2 = make_side(rhs->parsed.term, *env, rhs_mode == "i");
    EquivVerdict verdict = cmd_equiv->parsed()
                               ? trace_equiv(c1, c2, fuel, *domain)
                               : bisim(c1, c2, fuel, *domain);
    return verdict_exit(verdict);
  }

  if (cmd_live->parsed()) {
    auto loaded = load(file);
    if (!loaded) return kUsage;
    if (live_mode == "infer") {
      auto inferred = live_infer(loaded->parsed.term);
      if (!inferred) {
        std::cerr << "liveness inference failed\n";
        return kNegative;
      }
      std::cout << print(inferred->term, inferred->ann);
      return kOk;
    }
    if (!loaded->parsed.ann) {
      std::cerr << file << ": live check needs @-annotations\n";
      return kUsage;
    }
    bool ok = live_check({}, loaded->parsed.ann->live, *loaded->parsed.term,
                         *loaded->parsed.ann);
    std::cout << (ok ? "live: ok" : "live: rejected") << "\n";
    return ok ? kOk : kNegative;
  }

  if (cmd_coh->parsed()) {
    auto loaded = load(file);
    if (!loaded) return kUsage;
    // Prefer the source term so failures can carry positions.
    TermPtr term = loaded->parsed.term;
    AnnPtr ann = loaded->parsed.ann;
    if (!globals_complete(*term)) {
      auto prepared = ensure_annotated(*loaded);
      if (!prepared) return kNegative;
      term = prepared->term;
      ann = prepared->ann;
    } else if (!ann) {
      ann = shape_ann(*term);
    }
    auto failure = coh_find_failure({}, *term, *ann);
    if (!failure) {
      std::cout << "coherent\n";
      return kOk;
    }
    std::cout << "not coherent: " << failure->reason;
    auto pos = loaded->parsed.positions.find(failure->node);
    if (pos != loaded->parsed.positions.end())
      std::cout << " at " << file << ":" << pos->second.line << ":"
                << pos->second.col;
    std::cout << "\n";
    return kNegative;
  }

  if (cmd_apart->parsed()) {
    auto loaded = load(file);
    if (!loaded) return kUsage;
    auto result = rename_apart({}, free_vars(*loaded->parsed.term),
                               *loaded->parsed.term);
    if (!result) {
      std::cerr << "rename apart precondition violated\n";
      return kNegative;
    }
    emit_output(print(result->term), out_file);
    return kOk;
  }

  if (cmd_alpha->parsed()) {
    auto lhs = load(file);
    if (!lhs) return kUsage;
    auto rhs = load(file2);
    if (!rhs) return kUsage;
    bool ok = alpha_check(*lhs->parsed.term, *rhs->parsed.term).has_value();
    std::cout << (ok ? "alpha-equivalent" : "not alpha-equivalent") << "\n";
    return ok ? kOk : kNegative;
  }

  if (cmd_rassign->parsed()) {
    auto loaded = load(file);
    if (!loaded) return kUsage;
    auto inferred = live_infer(loaded->parsed.term);
    if (!inferred) {
      std::cerr << "liveness inference failed\n";
      return kNegative;
    }
    Renaming initial;
    uint32_t next = 0;
    for (Var v : free_vars(*inferred->term)) initial.set(v, var_at(next++));
    RassignOutcome outcome = rassign(initial, *inferred->term, *inferred->ann);
    if (!outcome.ok()) {
      std::cerr << "rassign: " << outcome.error << "\n";
      return kNegative;
    }
    for (Var v : occ_vars(*inferred->term))
      std::cout << name(v) << " -> " << name((*outcome.assignment)(v)) << "\n";
    std::cout << print(rename_term(*outcome.assignment, *inferred->term));
    return kOk;
  }

  if (cmd_compile->parsed()) {
    auto loaded = load(file);
    if (!loaded) return kUsage;
    CompileOptions options;
    options.prune_unreachable = prune;
    PipelineReport report = compile(loaded->parsed.term, options);
    if (json_output) {
      nlohmann::json j;
      j["stages"] = nlohmann::json::array();
      for (const auto& stage : report.stages)
        j["stages"].push_back({{"stage", stage.stage},
                               {"verdict", stage.ok ? "ok" : "fail"},
                               {"witness", stage.detail}});
      j["k"] = report.max_live;
      j["names"] = report.names_used;
      j["steps"] = report.steps;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << report_text(report);
    }
    if (!report.ok) return kNegative;
    emit_output(print(report.output, report.output_ann), out_file);
    return kOk;
  }

  if (cmd_fuzz->parsed()) {
    auto check = parse_fuzz_check(check_name);
    if (!check) {
      std::cerr << "unknown check '" << check_name << "'\n";
      return kUsage;
    }
    FuzzOptions options;
    options.seeds = seeds;
    options.gen.max_depth = depth;
    options.gen.seed = base_seed;
    options.gen.free_vars = 2;
    options.gen.extern_prob = extern_prob;
    options.gen.var_pool = var_pool;
    options.gen.label_pool = label_pool;
    options.fuel = fuel;
    options.domain = *domain;
    options.jobs = jobs;
    options.corpus_dir = corpus;
    FuzzReport report = run_fuzz(*check, options);
    if (json_output) {
      nlohmann::json j;
      j["check"] = std::string(fuzz_check_name(*check));
      j["seeds"] = report.seeds_run;
      j["applicable"] = report.applicable;
      j["failures"] = nlohmann::json::array();
      for (const auto& failure : report.failures)
        j["failures"].push_back({{"seed", failure.seed},
                                 {"witness", failure.detail},
                                 {"program", print(failure.program)}});
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << fuzz_check_name(*check) << ": " << report.seeds_run
                << " seeds, " << report.applicable << " applicable, "
                << report.failures.size() << " failures\n";
      for (const auto& failure : report.failures)
        std::cout << "seed " << failure.seed << ": " << failure.detail << "\n"
                  << print(failure.program);
    }
    return report.failures.empty() ? kOk : kNegative;
  }

  return kUsage;
}

}  // namespace il::cli
