#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "il/context.hpp"
#include "il/term.hpp"

namespace il {

// Run-time function value under the functional reading: definition-time
// environment, parameters, body.
struct Closure {
  Env env;
  std::vector<Var> params;
  TermPtr body;

  friend bool operator==(const Closure& a, const Closure& b) {
    return a.env == b.env && a.params == b.params && a.body == b.body;
  }
};

// Under the imperative reading blocks carry no environment; a called
// function sees all previous updates.
struct Block {
  std::vector<Var> params;
  TermPtr body;

  friend bool operator==(const Block& a, const Block& b) {
    return a.params == b.params && a.body == b.body;
  }
};

struct FConfig {
  Ctx<Closure> funcs;
  Env env;
  TermPtr term;

  friend bool operator==(const FConfig&, const FConfig&) = default;
};

struct IConfig {
  Ctx<Block> blocks;
  Env env;
  TermPtr term;

  friend bool operator==(const IConfig&, const IConfig&) = default;
};

// Both interpretations share the syntax; the reduction system is the sum of
// the two configuration spaces.
using Configuration = std::variant<FConfig, IConfig>;

Configuration f_config(Ctx<Closure> funcs, Env env, TermPtr term);
Configuration i_config(Ctx<Block> blocks, Env env, TermPtr term);

const Env& config_env(const Configuration& c);
const TermPtr& config_term(const Configuration& c);
size_t config_ctx_size(const Configuration& c);

struct ExtEvent {
  Value value;
  Action act;

  friend auto operator<=>(const ExtEvent&, const ExtEvent&) = default;
};

// tau or an external event v = alpha.
struct Event {
  std::optional<ExtEvent> ext;

  bool is_tau() const { return !ext.has_value(); }
  static Event tau() { return Event{}; }
  static Event external(Value v, Action a) { return Event{ExtEvent{v, a}}; }
};

// Exactly one of these applies to any configuration.
struct StepSilent {
  Configuration next;
};
struct StepExternal {
  Action act;
  Var binder;
  TermPtr cont;
};
struct StepTerminal {};

using StepOutcome = std::variant<StepSilent, StepExternal, StepTerminal>;

// Implements the reduction rules of both readings. Stuck configurations
// (undefined label, failed evaluation, argument/parameter length mismatch,
// failed guard) are terminal, never an error.
StepOutcome classify(const Configuration& c);

Configuration resume_external(const Configuration& c, const StepExternal& ext,
                              Value v);

// All labeled transitions with external results drawn from `domain`:
// exactly one tau successor for silent configurations, one successor per
// domain value for ready ones, none for terminal ones.
std::vector<std::pair<Event, Configuration>> successors(
    const Configuration& c, std::span<const Value> domain);

// Result of a configuration: the value of the expression for return forms,
// failure otherwise. A configuration with a result is terminal.
std::optional<Value> res(const Configuration& c);

// Chooses result values for system calls during a concrete run.
class ExternOracle {
 public:
  virtual ~ExternOracle() = default;
  virtual Value choose(Action a, size_t nth_call) = 0;
};

class FixedOracle : public ExternOracle {
 public:
  explicit FixedOracle(Value v) : value_(v) {}
  Value choose(Action, size_t) override { return value_; }

 private:
  Value value_;
};

class ScriptOracle : public ExternOracle {
 public:
  explicit ScriptOracle(std::vector<Value> script) : script_(std::move(script)) {}
  Value choose(Action, size_t nth_call) override {
    return nth_call < script_.size() ? script_[nth_call] : 0;
  }

 private:
  std::vector<Value> script_;
};

class SeededOracle : public ExternOracle {
 public:
  explicit SeededOracle(uint64_t seed) : state_(seed) {}
  Value choose(Action, size_t) override;

 private:
  uint64_t state_;
};

struct RunResult {
  Configuration final_config;
  std::optional<Value> result;
  size_t steps = 0;
  bool fuel_exhausted = false;
  std::vector<ExtEvent> events;
};

// Iterated stepping, bounded by fuel; divergence is never detected, only
// bounded.
RunResult run(Configuration c, size_t fuel, ExternOracle& oracle);

// Pointwise closure-to-block projection; placeholders preserved.
Ctx<Block> strip(const Ctx<Closure>& funcs);

}  // namespace il
