#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "il/equivalence.hpp"
#include "il/generator.hpp"

namespace il {

// The differential properties the fuzzer can drive.
enum class FuzzCheck {
  Invariance,       // coherent generated programs are never inequivalent F vs I
  Rassign,          // pipeline assertions, name bound, end-to-end equivalence
  Alpha,            // alpha algebra and alpha soundness
  Apart,            // renaming apart: decision procedure and alpha relation
  OracleAgreement,  // trace-set and bisimulation verdicts never contradict
};

std::optional<FuzzCheck> parse_fuzz_check(std::string_view name);
std::string_view fuzz_check_name(FuzzCheck check);

struct FuzzOptions {
  size_t seeds = 1000;
  GenConfig gen;  // per-trial seed is derived from the trial index
  size_t fuel = 256;
  std::vector<Value> domain = {0, 1};
  std::string corpus_dir;  // minimized failures written here when nonempty
  unsigned jobs = 1;
};

struct FuzzFailure {
  uint64_t seed;
  std::string detail;
  TermPtr program;  // structurally minimized
};

struct FuzzReport {
  FuzzCheck check = FuzzCheck::Invariance;
  size_t seeds_run = 0;
  size_t applicable = 0;  // trials where the property premise held
  std::vector<FuzzFailure> failures;
};

FuzzReport run_fuzz(FuzzCheck check, const FuzzOptions& options);

// One trial of a check against a concrete program; empty result means pass.
// `applicable` reports whether the property premise held for this input.
std::optional<std::string> fuzz_trial(FuzzCheck check, const TermPtr& program,
                                      uint64_t seed, const FuzzOptions& options,
                                      bool* applicable = nullptr);

// Greedy structural minimization: smallest variant that still fails the
// trial.
TermPtr shrink_failure(FuzzCheck check, const TermPtr& program, uint64_t seed,
                       const FuzzOptions& options);

}  // namespace il
