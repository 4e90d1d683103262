#pragma once

#include <string>
#include <vector>

#include "il/alpha.hpp"
#include "il/rassign.hpp"

namespace il {

struct StageReport {
  std::string stage;
  bool ok = false;
  std::string detail;
};

struct PipelineReport {
  bool ok = false;
  std::vector<StageReport> stages;
  TermPtr renamed_apart;  // after the first stage, globals filled in
  AnnPtr renamed_ann;
  Renaming assignment;
  TermPtr output;  // final program, readable under the imperative semantics
  AnnPtr output_ann;
  size_t max_live = 0;
  size_t names_used = 0;
  size_t steps = 0;  // stages executed
};

struct CompileOptions {
  bool prune_unreachable = false;
  FreshSource* apart_fresh = nullptr;   // default: name-minting
  FreshSource* assign_fresh = nullptr;  // default: smallest index
};

// The whole translation: rename apart, infer liveness, assign registers,
// rename. Each stage's guarantee is re-checked and reported; any failed
// check aborts with the stage name and a witness in the detail.
PipelineReport compile(const TermPtr& input, const CompileOptions& options = {});

std::string report_text(const PipelineReport& report);

}  // namespace il
