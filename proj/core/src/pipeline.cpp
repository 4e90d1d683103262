#include "il/pipeline.hpp"

#include "il/coherence.hpp"
#include "il/print.hpp"

namespace il {

namespace {

// Compact injective image for the free variables: the n lowest-indexed
// variables, in index order. Keeps the name bound tight in the number of
// inputs.
Renaming compact_free_map(const VarSet& free) {
  Renaming rho;
  uint32_t next = 0;
  for (Var v : free) rho.set(v, var_at(next++));
  return rho;
}

}  // namespace

PipelineReport compile(const TermPtr& input, const CompileOptions& options) {
  PipelineReport report;
  auto fail = [&](const std::string& stage, const std::string& detail) {
    report.stages.push_back({stage, false, detail});
    report.ok = false;
    return report;
  };
  auto pass = [&](const std::string& stage, const std::string& detail = "") {
    report.stages.push_back({stage, true, detail});
  };

  TermPtr source = input;
  if (options.prune_unreachable) source = prune_unreachable(*input);
  if (!params_wellformed(*source))
    return fail("input", "duplicate parameters");
  if (!reachable_check(*source))
    return fail("input", "unreachable function definition (use pruning)");

  // Rename apart; the result must pass the apart decision procedure and be
  // alpha-equivalent to the input.
  report.steps = 1;
  VarSet scope = free_vars(*source);
  auto apart = rename_apart({}, scope, *source, options.apart_fresh);
  if (!apart) return fail("rename-apart", "scope precondition violated");
  auto apart_ok = apart_check(scope, *apart->term);
  if (!apart_ok || !(*apart_ok == apart->new_binders))
    return fail("rename-apart", "output not renamed apart");
  if (!alpha_check(*source, *apart->term))
    return fail("rename-apart", "output not alpha-equivalent to input");
  pass("rename-apart");

  report.steps = 2;
  auto live = live_infer(apart->term);
  if (!live) return fail("liveness", "inference failed");
  if (!live_check({}, live->root_live, *live->term, *live->ann))
    return fail("liveness", "inferred annotation rejected by the checker");
  report.renamed_apart = live->term;
  report.renamed_ann = live->ann;
  report.max_live = max_live(*live->ann);
  pass("liveness");

  report.steps = 3;
  Renaming initial = compact_free_map(free_vars(*live->term));
  RassignOutcome assigned =
      rassign(initial, *live->term, *live->ann, options.assign_fresh);
  if (!assigned.ok()) return fail("register-assignment", assigned.error);
  report.assignment = *assigned.assignment;
  if (!inj_check(report.assignment, *live->term, *live->ann))
    return fail("register-assignment", "assignment not locally injective");
  report.names_used = names_used(report.assignment, *live->term).size();
  pass("register-assignment");

  report.steps = 4;
  report.output = rename_term(report.assignment, *live->term);
  report.output_ann = rename_ann(report.assignment, *live->ann);
  if (!coh_check({}, *report.output, *report.output_ann))
    return fail("rename", "renamed program not coherent");
  if (!alpha_check(*report.output, *live->term))
    return fail("rename", "renamed program not alpha-equivalent");
  pass("rename");

  report.ok = true;
  return report;
}

std::string report_text(const PipelineReport& report) {
  std::string out;
  for (const auto& stage : report.stages) {
    out += stage.stage;
    out += stage.ok ? ": ok" : ": failed";
    if (!stage.detail.empty()) out += " (" + stage.detail + ")";
    out += "\n";
  }
  if (report.ok) {
    out += "max live: " + std::to_string(report.max_live) + "\n";
    out += "names used: " + std::to_string(report.names_used) + "\n";
  }
  return out;
}

}  // namespace il
