#include "il/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "il/util.hpp"

namespace il {

std::string to_string(const PartialTrace& t) {
  std::string out;
  for (const ExtEvent& e : t.events) {
    if (!out.empty()) out += " ";
    out += std::to_string(e.value) + "=" + name(e.act);
  }
  if (!out.empty()) out += " ";
  if (t.open)
    out += "...";
  else if (t.result)
    out += "-> " + std::to_string(*t.result);
  else
    out += "-> bot";
  return out;
}

namespace {

std::vector<Value> normalize_domain(std::span<const Value> domain) {
  std::vector<Value> out(domain.begin(), domain.end());
  if (out.empty()) out.push_back(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void enumerate(const Configuration& c, size_t fuel,
               std::span<const Value> domain, std::vector<ExtEvent>& prefix,
               TraceSet& out, size_t& budget) {
  if (budget == 0) {
    out.complete = false;
    return;
  }
  --budget;
  out.items.insert(PartialTrace{prefix, true, std::nullopt});
  StepOutcome outcome = classify(c);
  if (std::holds_alternative<StepTerminal>(outcome)) {
    out.items.insert(PartialTrace{prefix, false, res(c)});
    return;
  }
  if (fuel == 0) {
    out.complete = false;
    return;
  }
  if (const auto* s = std::get_if<StepSilent>(&outcome)) {
    enumerate(s->next, fuel - 1, domain, prefix, out, budget);
    return;
  }
  const auto& e = std::get<StepExternal>(outcome);
  for (Value v : domain) {
    prefix.push_back({v, e.act});
    enumerate(resume_external(c, e, v), fuel - 1, domain, prefix, out, budget);
    prefix.pop_back();
  }
}

// Follows the unique path of `t` from `c`. Internal determinism makes the
// pursuit decisive unless fuel runs out.
enum class Walk { Refuted, Produces, OutOfFuel };

Walk pursue(Configuration c, const PartialTrace& t, size_t fuel) {
  size_t i = 0;
  for (;;) {
    if (t.open && i == t.events.size()) return Walk::Produces;
    StepOutcome outcome = classify(c);
    if (std::holds_alternative<StepTerminal>(outcome)) {
      if (i < t.events.size()) return Walk::Refuted;
      return res(c) == t.result ? Walk::Produces : Walk::Refuted;
    }
    if (fuel == 0) return Walk::OutOfFuel;
    if (const auto* s = std::get_if<StepSilent>(&outcome)) {
      c = s->next;
      --fuel;
      continue;
    }
    const auto& e = std::get<StepExternal>(outcome);
    if (i == t.events.size()) {
      // A result trace would need the ready configuration to terminate
      // without another event.
      return Walk::Refuted;
    }
    if (t.events[i].act != e.act) return Walk::Refuted;
    c = resume_external(c, e, t.events[i].value);
    ++i;
    --fuel;
  }
}

bool shorter(const PartialTrace& a, const PartialTrace& b) {
  if (a.events.size() != b.events.size())
    return a.events.size() < b.events.size();
  return a < b;
}

}  // namespace

TraceSet traces(const Configuration& c, size_t fuel,
                std::span<const Value> domain, size_t node_budget) {
  TraceSet out;
  std::vector<Value> d = normalize_domain(domain);
  std::vector<ExtEvent> prefix;
  size_t budget = node_budget;
  enumerate(c, fuel, d, prefix, out, budget);
  return out;
}

EquivVerdict trace_equiv(const Configuration& c1, const Configuration& c2,
                         size_t fuel, std::span<const Value> domain,
                         size_t node_budget) {
  std::vector<Value> d = normalize_domain(domain);
  TraceSet t1 = traces(c1, fuel, d, node_budget);
  TraceSet t2 = traces(c2, fuel, d, node_budget);
  if (t1.items == t2.items) return {Verdict::Equivalent, std::nullopt, 0};

  struct Candidate {
    PartialTrace trace;
    int side;  // side that produced it
  };
  std::vector<Candidate> diffs;
  for (const auto& t : t1.items)
    if (!t2.items.contains(t)) diffs.push_back({t, 1});
  for (const auto& t : t2.items)
    if (!t1.items.contains(t)) diffs.push_back({t, 2});
  std::sort(diffs.begin(), diffs.end(), [](const auto& a, const auto& b) {
    if (shorter(a.trace, b.trace)) return true;
    if (shorter(b.trace, a.trace)) return false;
    return a.side < b.side;
  });
  for (const auto& cand : diffs) {
    const Configuration& other = cand.side == 1 ? c2 : c1;
    if (pursue(other, cand.trace, fuel) == Walk::Refuted)
      return {Verdict::Inequivalent, cand.trace, cand.side};
  }
  return {Verdict::Unknown, std::nullopt, 0};
}

namespace {

// Ordering on configurations for the visited-pair set. Terms compare by
// identity; runtime loops revisit identical subterm pointers.
bool term_ptr_less(const TermPtr& a, const TermPtr& b) {
  return std::less<const Term*>{}(a.get(), b.get());
}

int cmp_term_ptr(const TermPtr& a, const TermPtr& b) {
  if (term_ptr_less(a, b)) return -1;
  if (term_ptr_less(b, a)) return 1;
  return 0;
}

int cmp_env(const Env& a, const Env& b) {
  if (a.entries() < b.entries()) return -1;
  if (b.entries() < a.entries()) return 1;
  return 0;
}

int cmp_params(const std::vector<Var>& a, const std::vector<Var>& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

int cmp_closure(const Closure& a, const Closure& b) {
  if (int c = cmp_env(a.env, b.env)) return c;
  if (int c = cmp_params(a.params, b.params)) return c;
  return cmp_term_ptr(a.body, b.body);
}

int cmp_block(const Block& a, const Block& b) {
  if (int c = cmp_params(a.params, b.params)) return c;
  return cmp_term_ptr(a.body, b.body);
}

template <typename T, typename Cmp>
int cmp_ctx(const Ctx<T>& a, const Ctx<T>& b, Cmp cmp_payload) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name) return a[i].name < b[i].name ? -1 : 1;
    bool ha = a[i].value.has_value();
    bool hb = b[i].value.has_value();
    if (ha != hb) return ha < hb ? -1 : 1;
    if (ha)
      if (int c = cmp_payload(*a[i].value, *b[i].value)) return c;
  }
  return 0;
}

int cmp_config(const Configuration& a, const Configuration& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  if (const auto* fa = std::get_if<FConfig>(&a)) {
    const auto& fb = std::get<FConfig>(b);
    if (int c = cmp_ctx(fa->funcs, fb.funcs, cmp_closure)) return c;
    if (int c = cmp_env(fa->env, fb.env)) return c;
    return cmp_term_ptr(fa->term, fb.term);
  }
  const auto& ia = std::get<IConfig>(a);
  const auto& ib = std::get<IConfig>(b);
  if (int c = cmp_ctx(ia.blocks, ib.blocks, cmp_block)) return c;
  if (int c = cmp_env(ia.env, ib.env)) return c;
  return cmp_term_ptr(ia.term, ib.term);
}

struct PairLess {
  bool operator()(const std::pair<Configuration, Configuration>& a,
                  const std::pair<Configuration, Configuration>& b) const {
    if (int c = cmp_config(a.first, b.first)) return c < 0;
    return cmp_config(a.second, b.second) < 0;
  }
};

struct Commitment {
  enum Kind { Terminal, Ready, OutOfFuel } kind;
  Configuration config;
  std::optional<Value> result;  // Terminal
  StepExternal ext;             // Ready
};

Commitment advance(Configuration c, size_t& fuel) {
  for (;;) {
    StepOutcome outcome = classify(c);
    if (std::holds_alternative<StepTerminal>(outcome))
      return {Commitment::Terminal, c, res(c), {}};
    if (const auto* e = std::get_if<StepExternal>(&outcome))
      return {Commitment::Ready, c, std::nullopt, *e};
    if (fuel == 0) return {Commitment::OutOfFuel, c, std::nullopt, {}};
    c = std::get<StepSilent>(outcome).next;
    --fuel;
  }
}

struct BisimState {
  std::span<const Value> domain;
  size_t budget;
  // 0 = in progress (coinductive hypothesis), 1 = closed.
  std::map<std::pair<Configuration, Configuration>, int, PairLess> visited;
};

// Caps the per-side fuel by the remaining global budget and charges the
// steps actually taken.
Commitment advance_budgeted(const Configuration& c, size_t& fuel,
                            BisimState& state) {
  size_t allowance = std::min(fuel, state.budget);
  size_t before = allowance;
  Commitment m = advance(c, allowance);
  size_t used = before - allowance;
  fuel -= used;
  state.budget -= used;
  if (m.kind == Commitment::OutOfFuel && fuel > 0)
    return {Commitment::OutOfFuel, m.config, std::nullopt, {}};
  return m;
}

EquivVerdict bisim_rec(const Configuration& c1, const Configuration& c2,
                       size_t fuel1, size_t fuel2,
                       std::vector<ExtEvent>& events, BisimState& state) {
  if (state.budget == 0) return {Verdict::Unknown, std::nullopt, 0};
  --state.budget;
  Commitment m1 = advance_budgeted(c1, fuel1, state);
  Commitment m2 = advance_budgeted(c2, fuel2, state);
  if (m1.kind == Commitment::OutOfFuel || m2.kind == Commitment::OutOfFuel)
    return {Verdict::Unknown, std::nullopt, 0};

  if (m1.kind == Commitment::Terminal && m2.kind == Commitment::Terminal) {
    if (m1.result == m2.result) return {Verdict::Equivalent, std::nullopt, 0};
    return {Verdict::Inequivalent, PartialTrace{events, false, m1.result}, 1};
  }
  if (m1.kind != m2.kind) {
    // One side terminates after these events, the other must first emit
    // another event; the result trace belongs to the terminal side only.
    const Commitment& t = m1.kind == Commitment::Terminal ? m1 : m2;
    int side = m1.kind == Commitment::Terminal ? 1 : 2;
    return {Verdict::Inequivalent, PartialTrace{events, false, t.result}, side};
  }
  // Both ready.
  if (m1.ext.act != m2.ext.act) {
    std::vector<ExtEvent> w = events;
    w.push_back({state.domain.front(), m1.ext.act});
    return {Verdict::Inequivalent, PartialTrace{std::move(w), true, std::nullopt}, 1};
  }

  auto key = std::make_pair(m1.config, m2.config);
  auto [it, inserted] = state.visited.try_emplace(key, 0);
  if (!inserted) return {Verdict::Equivalent, std::nullopt, 0};

  bool any_unknown = false;
  for (Value v : state.domain) {
    events.push_back({v, m1.ext.act});
    EquivVerdict sub =
        bisim_rec(resume_external(m1.config, m1.ext, v),
                  resume_external(m2.config, m2.ext, v), fuel1, fuel2, events,
                  state);
    events.pop_back();
    if (sub.inequivalent()) return sub;
    if (sub.unknown()) any_unknown = true;
  }
  if (any_unknown) {
    state.visited.erase(key);
    return {Verdict::Unknown, std::nullopt, 0};
  }
  state.visited[key] = 1;
  return {Verdict::Equivalent, std::nullopt, 0};
}

}  // namespace

EquivVerdict bisim(const Configuration& c1, const Configuration& c2,
                   size_t fuel, std::span<const Value> domain,
                   size_t work_budget) {
  std::vector<Value> d = normalize_domain(domain);
  BisimState state{d, work_budget, {}};
  std::vector<ExtEvent> events;
  return bisim_rec(c1, c2, fuel, fuel, events, state);
}

EquivVerdict invariance_check(const TermPtr& s, const Env& env, size_t fuel,
                              std::span<const Value> domain) {
  return bisim(f_config({}, env, s), i_config({}, env, s), fuel, domain);
}

}  // namespace il
